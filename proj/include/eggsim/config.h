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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "eggsim/constants.h"

namespace eggsim {

// All quantities are SI; angular frequencies are rad/s.

struct MoleculeConfig {
    double dipole_moment = 2.3 * constants::debye;  // C m, <e|d|g>.x
    double mass = 45.0 * constants::atomic_mass_unit;
    double splitting = constants::two_pi * 10e9;  // |g> <-> |e>
    bool has_aux = true;

    /// Throws ConfigError unless d, m, splitting are positive and the
    /// splitting exceeds every given mode frequency by a factor of 100.
    void validate(const std::vector<double> &mode_frequencies) const;
};

struct TrapConfig {
    double field_radius = 0.5e-3;
    double secular_frequency = constants::two_pi * 1e6;  // radial COM
    double x_eq = 0.0;  // equilibrium offset from the microwave null
    int n_ions = 2;

    void validate() const;
};

struct ModeSpec {
    double frequency = 0.0;
    std::vector<double> participation;  // b_p^(i), one entry per ion

    void validate() const;
};

enum class Geometry { dipole, quadrupole };

struct DriveTone {
    Geometry geometry = Geometry::quadrupole;
    double frequency = 0.0;  // omega_m
    double amplitude = 0.0;  // V_m, volts
    double phase = 0.0;      // phi_m

    void validate() const;
};

struct GateConfig {
    double detuning = constants::two_pi * 200e3;  // gamma
    int target_mode = 0;
    double temperature = 0.1e-3;
};

struct HeatingConfig {
    double temperature = 0.5e-3;
    double t_end = 100e-6;
    int samples = 21;
    double mismatch = 0.0;       // V_m(1 +- mismatch/2) on the two sidebands
    double participation = 1.0;  // single-molecule b
    double thermal_epsilon = 1e-4;
};

struct MsConfig {
    double theta_end = constants::pi;  // final accumulated angle 2 Omega^2 eta1 eta2 t / gamma
    int samples = 41;
    double time_scale = 1.0;  // scales Omega and gamma together
    double thermal_epsilon = 1e-4;
    bool calibrate = true;
    bool include_spectator_mode = false;
    std::vector<int> fock_states;  // extra pure-Fock runs reported at the Bell point
    double tone_fraction = 0.5;    // each of the two tones carries tone_fraction * V_m
};

struct SpamConfig {
    double temperature = 0.5e-3;
    double drive_time = 0.8e-3;
    double threshold = 0.0;  // units of hbar omega_q; 0 selects the default rule
    double participation = 1.0;
    std::string input = "g";  // g | e | plus
    std::uint64_t seed = 1;
    double thermal_epsilon = 1e-4;
};

struct UltrafastConfig {
    int n_pulses = 4;
    double dp_base = 0.5;
    double max_total_time = 0.0;  // 0 -> ten COM periods
    double min_gap = 0.05;        // in COM periods
    bool balanced = true;         // require sum z_j = 0
    double x_eq_check = 1e-6;
    std::uint64_t seed = 7;
    int starts = 256;
    double t_pulse = 1e-8;  // kick duration, used by the finite-pulse checks
};

struct NumericsConfig {
    double guard_factor = 0.5;
    double steps_per_period = 40.0;
    double max_phase_per_step = 0.02;
    bool internal_frame = true;
    double norm_tolerance = 1e-6;
    double truncation_tolerance = 1e-6;
    int threads = 1;
    bool convergence_check = false;
};

struct ExperimentConfig {
    MoleculeConfig molecule;
    TrapConfig trap;
    double drive_amplitude = 10.0;  // V_m
    double drive_phase = 0.0;
    GateConfig gate;
    std::optional<std::vector<ModeSpec>> modes;  // overrides the two-ion model
    HeatingConfig heating;
    MsConfig ms;
    SpamConfig spam;
    UltrafastConfig ultrafast;
    NumericsConfig numerics;

    /// Mode list in use: the override if present, else the two-ion model.
    std::vector<ModeSpec> resolved_modes() const;
    /// Checks every type invariant; throws ConfigError on the first failure.
    void validate() const;
};

/// Parses a quantity. Numbers are taken as SI. Strings carry a unit suffix,
/// e.g. "1 MHz" (ordinary frequency, converted to rad/s), "0.5 mm", "2.3 D".
enum class Dimension { angular_frequency, length, time, voltage, temperature, dipole, mass, angle, dimensionless };
double parse_quantity(const nlohmann::json &value, Dimension dim);

ExperimentConfig config_from_json(const nlohmann::json &doc);
nlohmann::json config_to_json(const ExperimentConfig &cfg);
ExperimentConfig load_config(const std::string &path);

/// Applies `key=value` with a dotted key to a JSON document. The value is
/// parsed as JSON when possible, otherwise kept as a string.
void apply_override(nlohmann::json &doc, const std::string &assignment);

}  // namespace eggsim
