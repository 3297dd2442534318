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


#include "eggsim/designer.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "eggsim/errors.h"

namespace eggsim {
namespace {

constexpr double kTarget = std::numbers::pi / 4;

const PulseSequence &designed() {
    static const PulseSequence seq = design_sequence(ExperimentConfig{});
    return seq;
}

double period(const PulseSequence &s) { return 2 * std::numbers::pi / s.mode_freqs[0]; }

TEST(Designer, ClosesBothLoopsAndHitsTargetPhase) {
    const auto &s = designed();
    ASSERT_EQ(s.pulses.size(), 4u);
    auto r = closure_residual(s);
    EXPECT_LT(r[0], 1e-9 * s.dp_base);
    EXPECT_LT(r[1], 1e-9 * s.dp_base);
    EXPECT_NEAR(accumulated_phase(s), kTarget, 1e-6);
}

TEST(Designer, OperatorProductAgreesWithDesign) {
    const auto &s = designed();
    const auto reach = max_excursion(s);
    const auto d0 = static_cast<std::size_t>(std::ceil(4 * reach[0] * reach[0] + 12));
    const auto d1 = static_cast<std::size_t>(std::ceil(4 * reach[1] * reach[1] + 12));
    auto ex = extract_phase(s, {fock_vector(d0, 0), fock_vector(d1, 0)});
    EXPECT_NEAR(ex.phase, kTarget, 1e-6);
    for (const auto &a : ex.amplitudes) {
        EXPECT_NEAR(std::abs(a), 1.0, 1e-9);
    }
}

TEST(Designer, PhaseIndependentOfMotionalState) {
    const auto &s = designed();
    const std::size_t d = 40;
    auto thermalish = extract_phase(s, {fock_vector(d, 3), fock_vector(d, 2)});
    auto coherent = extract_phase(s, {coherent_vector(d, cd(0.8, -0.4)), coherent_vector(d, cd(-0.3, 0.5))});
    EXPECT_NEAR(thermalish.phase, kTarget, 1e-6);
    EXPECT_NEAR(coherent.phase, kTarget, 1e-6);
}

TEST(Designer, BalancedGapsAndTimeLimit) {
    const auto &s = designed();
    double zsum = 0;
    for (const auto &p : s.pulses) {
        zsum += p.z;
    }
    EXPECT_NEAR(zsum, 0.0, 1e-9);
    EXPECT_DOUBLE_EQ(s.pulses[0].z, 1.0);
    EXPECT_EQ(s.pulses[0].time, 0.0);
    for (std::size_t j = 1; j < s.pulses.size(); ++j) {
        EXPECT_GE(s.pulses[j].time - s.pulses[j - 1].time, 0.05 * period(s) * (1 - 1e-12));
    }
    EXPECT_LE(s.total_time(), 10 * period(s));
}

TEST(Designer, DeterministicForFixedSeed) {
    auto again = design_sequence(ExperimentConfig{});
    ASSERT_EQ(again.pulses.size(), designed().pulses.size());
    for (std::size_t j = 0; j < again.pulses.size(); ++j) {
        EXPECT_EQ(again.pulses[j].time, designed().pulses[j].time);
        EXPECT_EQ(again.pulses[j].z, designed().pulses[j].z);
    }
}

TEST(Designer, ThreadCountDoesNotChangeResult) {
    ExperimentConfig cfg;
    cfg.numerics.threads = 3;
    auto threaded = design_sequence(cfg);
    for (std::size_t j = 0; j < threaded.pulses.size(); ++j) {
        EXPECT_EQ(threaded.pulses[j].time, designed().pulses[j].time);
        EXPECT_EQ(threaded.pulses[j].z, designed().pulses[j].z);
    }
}

TEST(Designer, UnbalancedAndLongerSequences) {
    auto model = empty_sequence(ExperimentConfig{});
    DesignOptions opt;
    opt.balanced = false;
    opt.starts = 64;
    auto s = design_sequence(model, 4, opt);
    EXPECT_LT(std::max(closure_residual(s)[0], closure_residual(s)[1]), 1e-9 * s.dp_base);
    EXPECT_NEAR(accumulated_phase(s), kTarget, 1e-6);

    opt.balanced = true;
    opt.target_phase = -kTarget;
    auto six = design_sequence(model, 6, opt);
    ASSERT_EQ(six.pulses.size(), 6u);
    EXPECT_NEAR(accumulated_phase(six), -kTarget, 1e-6);
}

TEST(Designer, ResidualsOfDesignedCandidateVanish) {
    const auto &s = designed();
    DesignCandidate c;
    for (const auto &p : s.pulses) {
        c.z.push_back(p.z);
        c.tau.push_back(p.time * s.mode_freqs[0]);
    }
    auto r = design_residuals(s, c, DesignOptions{});
    ASSERT_EQ(r.size(), 6u);
    for (double v : r) {
        EXPECT_LT(std::abs(v), 1e-8);
    }
}

TEST(Designer, RejectsBadRequests) {
    auto model = empty_sequence(ExperimentConfig{});
    DesignOptions opt;
    EXPECT_THROW(design_sequence(model, 3, opt), ConfigError);
    opt.max_total_time = 0.1 * period(model);
    EXPECT_THROW(design_sequence(model, 4, opt), ConfigError);
}

TEST(Designer, FailsLoudlyWhenNoStartConverges) {
    auto model = empty_sequence(ExperimentConfig{});
    DesignOptions opt;
    opt.starts = 4;
    opt.max_iterations = 1;
    EXPECT_THROW(design_sequence(model, 4, opt), DesignFailure);
}

}  // namespace
}  // namespace eggsim
