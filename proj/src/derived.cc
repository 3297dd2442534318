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

#include "eggsim/derived.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "eggsim/errors.h"

namespace eggsim {

using namespace constants;

double rabi_frequency(double dipole_moment, double amplitude, double field_radius) {
    return dipole_moment * amplitude / (2.0 * field_radius * hbar);
}

double rabi_frequency(const MoleculeConfig &mol, const DriveTone &tone, const TrapConfig &trap) {
    return rabi_frequency(mol.dipole_moment, tone.amplitude, trap.field_radius);
}

double eta(double participation, double mass, double mode_frequency, double field_radius) {
    return std::sqrt(hbar / (2.0 * mass * mode_frequency * field_radius * field_radius)) * participation;
}

double eta(const ModeSpec &mode, std::size_t ion_index, const MoleculeConfig &mol, const TrapConfig &trap) {
    if (ion_index >= mode.participation.size()) {
        throw std::out_of_range(
            "ion index " + std::to_string(ion_index) + " out of range for a mode with " +
            std::to_string(mode.participation.size()) + " participation entries");
    }
    return eta(mode.participation[ion_index], mol.mass, mode.frequency, trap.field_radius);
}

double thermal_occupation(double temperature, double frequency) {
    if (temperature < 0 || frequency <= 0) {
        throw std::invalid_argument("thermal_occupation needs T >= 0 and omega > 0");
    }
    if (temperature == 0) {
        return 0.0;
    }
    return 1.0 / std::expm1(hbar * frequency / (boltzmann * temperature));
}

std::pair<ModeSpec, ModeSpec> two_ion_modes(const TrapConfig &trap) {
    if (trap.n_ions != 2) {
        throw ConfigError("the built-in mode model supports exactly 2 ions, got " + std::to_string(trap.n_ions));
    }
    double s = 1.0 / std::sqrt(2.0);
    ModeSpec com{trap.secular_frequency, {s, s}};
    ModeSpec rel{trap.secular_frequency / std::sqrt(3.0), {s, -s}};
    return {com, rel};
}

double ms_gate_time(double rabi, double eta1, double eta2, double detuning) {
    double coupling = 2.0 * rabi * rabi * eta1 * eta2;
    if (coupling == 0) {
        throw std::invalid_argument("ms_gate_time: zero spin-spin coupling");
    }
    if (detuning <= 0) {
        throw std::invalid_argument("ms_gate_time: detuning must be positive");
    }
    return pi * detuning / coupling;
}

double ms_angle(double rabi, double eta1, double eta2, double detuning, double t) {
    return 2.0 * rabi * rabi * eta1 * eta2 * t / detuning;
}

double carrier_phase_bound(double rabi, double x_eq, double field_radius, double mode_frequency, double detuning) {
    return 8.0 * rabi * x_eq / (field_radius * (mode_frequency + detuning));
}

double xeq_tolerance(
    double target_infidelity,
    double mode_frequency,
    double detuning,
    double field_radius,
    double amplitude,
    double dipole_moment) {
    // bound = sqrt(2 F); invert carrier_phase_bound with Omega = d V / (2 r_o hbar).
    return std::sqrt(2.0 * target_infidelity) * hbar * (mode_frequency + detuning) * field_radius * field_radius /
           (4.0 * amplitude * dipole_moment);
}

double quadrupole_carrier_rate(double voltage, double field_radius) {
    return elementary_charge * bohr_radius * bohr_radius * 2.0 * voltage / (hbar * field_radius * field_radius);
}

double ms_validity_ratio(double rabi, double eta_q, double detuning) {
    return detuning / (2.0 * rabi * std::abs(eta_q));
}

}  // namespace eggsim
