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

#include <cstddef>
#include <utility>

#include "eggsim/config.h"

namespace eggsim {

/// Carrier Rabi frequency Omega = d V_m / (2 r_o hbar). Shared prefactor of
/// both drive geometries.
double rabi_frequency(double dipole_moment, double amplitude, double field_radius);
double rabi_frequency(const MoleculeConfig &mol, const DriveTone &tone, const TrapConfig &trap);

/// Gradient coupling eta_p^(i) = sqrt(hbar / (2 m omega_p r_o^2)) b_p^(i).
double eta(const ModeSpec &mode, std::size_t ion_index, const MoleculeConfig &mol, const TrapConfig &trap);
double eta(double participation, double mass, double mode_frequency, double field_radius);

/// Bose-Einstein occupation; zero at T = 0.
double thermal_occupation(double temperature, double frequency);

/// Equal-mass two-ion radial modes: COM at omega_1 with b = (1, 1)/sqrt2 and
/// the relative mode at omega_1/sqrt3 with b = (1, -1)/sqrt2.
std::pair<ModeSpec, ModeSpec> two_ion_modes(const TrapConfig &trap);

/// Time for the angle of exp(-i theta X1 X2) to reach pi:
/// t = pi gamma / (2 Omega^2 eta1 eta2). The Bell point (theta = pi/4)
/// falls at a quarter of it.
double ms_gate_time(double rabi, double eta1, double eta2, double detuning);

/// Accumulated two-qubit angle 2 Omega^2 eta1 eta2 t / gamma.
double ms_angle(double rabi, double eta1, double eta2, double detuning, double t);

/// Largest carrier phase 8 Omega x_eq / (r_o (omega_q + gamma)).
double carrier_phase_bound(double rabi, double x_eq, double field_radius, double mode_frequency, double detuning);

/// Largest x_eq for which the carrier bound stays within `target_infidelity`
/// (infidelity = bound^2 / 2). At 1e-4 this is hbar (w+g) r_o^2 / (200 sqrt2 V d).
double xeq_tolerance(
    double target_infidelity,
    double mode_frequency,
    double detuning,
    double field_radius,
    double amplitude,
    double dipole_moment);

/// Order-of-magnitude rate of a trap-gradient driven quadrupole carrier,
/// e a0^2 (2V) / (hbar r_o^2), in rad/s.
double quadrupole_carrier_rate(double voltage, double field_radius);

/// gamma / (2 Omega eta): the analytic two-qubit propagator needs this > 10.
double ms_validity_ratio(double rabi, double eta_q, double detuning);

}  // namespace eggsim
