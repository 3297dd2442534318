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
#include <vector>

#include "eggsim/config.h"
#include "eggsim/evolve.h"
#include "eggsim/fock.h"

namespace eggsim {

/// Fock cutoff (n_max) for a thermal member starting in |n> that may be
/// displaced by up to |alpha|. Never below the ensemble-wide rule
/// ceil(1.5 (nbar + |alpha|^2) + 10); larger for high-n members, whose
/// displaced distribution reaches further up the ladder.
std::size_t member_fock_cutoff(std::size_t n, double alpha_max, double nbar);

/// Thermal ensemble of |internal> (x) |n> over the Bose-Einstein weights,
/// each member in its own truncated space.
MixedEnsemble thermal_ensemble(
    const std::vector<CVec> &internal, std::size_t levels, double nbar, double epsilon, double alpha_max);

struct HeatingResult {
    EvolutionResult evolution;
    double nbar = 0.0;
    double coupling = 0.0;  // 2 Omega eta
    std::vector<double> analytic;  // nbar + (2 Omega eta t)^2
};

/// Single molecule, one mode (omega_q, participation b), starting in |g>
/// with a thermal mode. Two quadrupole tones at splitting +- omega_q with
/// amplitudes V (1 +- mismatch / 2), full interaction frame.
HeatingResult heating_scenario(const ExperimentConfig &cfg);

/// Tones for the two-qubit gate at splitting +- (omega_q + offset).
std::vector<DriveTone> ms_tones(const ExperimentConfig &cfg, double offset, double amplitude);

struct MsCalibration {
    double offset = 0.0;  // tone offset from omega_q that realises the target rate
    double measured_rate = 0.0;
    double target_rate = 0.0;
    int iterations = 0;
};

struct MsResult {
    EvolutionResult evolution;
    std::vector<double> theta;  // 2 Omega^2 eta1 eta2 t / gamma per sample
    double rabi = 0.0;          // after time scaling
    double detuning = 0.0;      // gamma after time scaling
    double eta1 = 0.0;
    double eta2 = 0.0;
    double bell_time = 0.0;
    std::size_t bell_sample = 0;
    double bell_fidelity = 0.0;
    double validity_ratio = 0.0;
    MsCalibration calibration;
};

/// Measures the two-qubit angle rate for a given tone offset from short
/// vacuum runs of |+X+X> and |+X-X>, then solves for the offset that gives
/// 2 Omega^2 eta1 eta2 / gamma by secant iteration.
MsCalibration calibrate_ms(const ExperimentConfig &cfg);

/// Two molecules from |g,g> with the target mode thermal at gate.temperature
/// (or the listed pure Fock states), evolved under the full gradient drive.
MsResult ms_scenario(const ExperimentConfig &cfg);

struct FockScanEntry {
    std::size_t n = 0;
    double p_gg = 0.0;
    double p_ee = 0.0;
    double fidelity = 0.0;
};

/// Per-Fock-state populations and fidelity at the Bell point.
std::vector<FockScanEntry> ms_fock_scan(const ExperimentConfig &cfg, const std::vector<std::size_t> &fock_states);

}  // namespace eggsim
