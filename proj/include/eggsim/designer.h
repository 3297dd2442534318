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
#include <vector>

#include "eggsim/config.h"
#include "eggsim/ultrafast.h"

namespace eggsim {

struct DesignOptions {
    double target_phase = 0.7853981633974483;  // pi/4
    double max_total_time = 0.0;               // seconds; 0 means ten COM periods
    double min_gap = 0.05;                     // COM periods between consecutive pulses
    bool balanced = true;                      // add sum_j z_j = 0
    std::uint64_t seed = 7;
    int starts = 256;
    int threads = 1;
    int max_iterations = 400;  // per Levenberg-Marquardt solve
    double tolerance = 1e-12;  // on every scaled residual
};

DesignOptions design_options(const ExperimentConfig &cfg);

struct DesignCandidate {
    std::vector<double> z;    // z_1 = 1
    std::vector<double> tau;  // omega_COM T_j
    double residual = 0.0;    // max-abs scaled residual
    bool feasible = false;
};

/// Scaled residuals of a candidate: closure (Re, Im) of both modes in units
/// of dp_base, Phi - target, and sum z when balanced.
std::vector<double> design_residuals(const PulseSequence &model, const DesignCandidate &c, const DesignOptions &opt);

/// Finds N pulse kicks and times that close both phase-space loops and
/// accumulate the target phase, minimising the total time among the
/// solutions found. `model` supplies dp_base, mode frequencies, kick ratios
/// and t_pulse; its pulse list is ignored. Throws DesignFailure when no
/// start converges.
PulseSequence design_sequence(const PulseSequence &model, int n_pulses, const DesignOptions &opt);

PulseSequence design_sequence(const ExperimentConfig &cfg);

}  // namespace eggsim
