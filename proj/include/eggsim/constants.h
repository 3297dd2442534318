// Copyright 2026 The eggsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <numbers>

namespace eggsim::constants {

// CODATA 2018 recommended values, SI units.
//
//   name              value                      unit   status
//   speed_of_light    299792458                  m/s    exact
//   planck            6.62607015e-34             J s    exact
//   hbar              1.054571817e-34            J s    (h / 2pi, published digits)
//   boltzmann         1.380649e-23               J/K    exact
//   elementary_charge 1.602176634e-19            C      exact
//   bohr_radius       5.29177210903e-11          m
//   atomic_mass_unit  1.66053906660e-27          kg
//   debye             1e-21 / c                  C m    (definition)
inline constexpr double speed_of_light = 299792458.0;
inline constexpr double planck = 6.62607015e-34;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double boltzmann = 1.380649e-23;
inline constexpr double elementary_charge = 1.602176634e-19;
inline constexpr double bohr_radius = 5.29177210903e-11;
inline constexpr double atomic_mass_unit = 1.66053906660e-27;
inline constexpr double debye = 1e-21 / speed_of_light;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace eggsim::constants
