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

#include "eggsim/config.h"
#include "eggsim/fock.h"

namespace eggsim {

struct SpamStep {
    std::string name;
    std::string detail;
};

struct SpamRecord {
    bool bright = false;
    double delta_e = 0.0;           // measured mode energy minus nbar, units of hbar omega_q
    std::size_t measured_n = 0;     // projected phonon number
    std::string label;              // "e" (found in |+X>) or "g" (found in |a>)
    double threshold = 0.0;         // units of hbar omega_q
    double p_bright = 0.0;          // probability of a bright herald for this input
    double dark_error = 0.0;        // P(bright | undisplaced branch)
    double bright_error = 0.0;      // P(dark | displaced branch)
    bool repeat_bright = false;     // herald of the repeated measurement
    double repeat_probability = 0.0;  // P(repeat herald == first herald)
    double alpha = 0.0;             // |2 Omega eta t_d|
    double nbar = 0.0;
    std::vector<SpamStep> log;
};

/// Phonon-number distributions the detector sees: P(m) for the branch left
/// in place (|a>) and for a displaced branch (|+-X>), thermal-averaged.
struct SpamDistributions {
    std::vector<double> dark;
    std::vector<double> bright;
    double alpha = 0.0;
    double nbar = 0.0;
};

SpamDistributions spam_distributions(const ExperimentConfig &cfg);

/// Default threshold rule max(4 nbar, |alpha|^2 / 4), in units of hbar omega_q.
double default_spam_threshold(double nbar, double alpha);

/// Runs shelve (g -> a), Hadamard (e -> +X), state-dependent displacement for
/// spam.drive_time, and an ideal projective threshold on the mode energy.
/// `internal` is a 3-level amplitude vector (g, e, a). The herald is drawn
/// from a generator seeded by spam.seed; the measurement is then repeated on
/// the post-measurement state (mapped back and re-thermalised).
/// Throws AmbiguousThresholdError if either branch puts more than 1e-6 of
/// its weight on the wrong side of the threshold.
SpamRecord spam_protocol(const CVec &internal, const ExperimentConfig &cfg, std::optional<double> threshold = std::nullopt);

/// Input named by spam.input: "g", "e", or "plus".
CVec spam_input_state(const std::string &name);

struct HeraldLoopResult {
    int attempts = 0;
    bool success = false;
};

/// Repeats a stochastic preparation step with success probability p until it
/// succeeds or max_attempts is reached. Only the bookkeeping is modelled.
HeraldLoopResult herald_loop(double success_probability, std::uint64_t seed, int max_attempts);

nlohmann::json to_json(const SpamRecord &record);

}  // namespace eggsim
