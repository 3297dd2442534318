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


#include "eggsim/spam.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "eggsim/derived.h"
#include "eggsim/errors.h"

namespace eggsim {
namespace {

ExperimentConfig default_config() { return ExperimentConfig{}; }

TEST(SpamDistributions, DarkIsThermalAndBrightIsShifted) {
    auto cfg = default_config();
    auto d = spam_distributions(cfg);
    const double rabi = rabi_frequency(cfg.molecule.dipole_moment, cfg.drive_amplitude, cfg.trap.field_radius);
    const double e = eta(1.0, cfg.molecule.mass, cfg.trap.secular_frequency, cfg.trap.field_radius);
    EXPECT_NEAR(d.alpha, 2 * rabi * e * cfg.spam.drive_time, 1e-9 * d.alpha);
    EXPECT_NEAR(d.nbar, 9.93, 0.01);
    double sd = 0, sb = 0, mb = 0;
    for (std::size_t m = 0; m < d.dark.size(); ++m) {
        sd += d.dark[m];
        sb += d.bright[m];
        mb += m * d.bright[m];
    }
    EXPECT_NEAR(sd, 1.0, 1e-12);
    EXPECT_NEAR(sb, 1.0, 1e-9);
    // Displacing a thermal state by alpha raises <n> by |alpha|^2. The kept
    // thermal members carry a mean a little below nbar.
    EXPECT_NEAR(mb, d.nbar + d.alpha * d.alpha, 0.05);
    const double q = d.nbar / (d.nbar + 1);
    EXPECT_NEAR(d.dark[3] / d.dark[2], q, 1e-12);
}

TEST(Spam, GroundAndExcitedAreClassifiedWithoutError) {
    auto cfg = default_config();
    auto g = spam_protocol(spam_input_state("g"), cfg);
    auto e = spam_protocol(spam_input_state("e"), cfg);
    EXPECT_EQ(g.label, "g");
    EXPECT_FALSE(g.bright);
    EXPECT_EQ(e.label, "e");
    EXPECT_TRUE(e.bright);
    EXPECT_LT(g.p_bright, 1e-12);
    EXPECT_GT(e.p_bright, 1 - 1e-12);
    EXPECT_LT(g.dark_error, 1e-6);
    EXPECT_LT(g.bright_error, 1e-6);
    EXPECT_DOUBLE_EQ(g.threshold, default_spam_threshold(g.nbar, g.alpha));
    // QND: the repeated measurement reproduces the first herald.
    EXPECT_EQ(g.repeat_bright, g.bright);
    EXPECT_EQ(e.repeat_bright, e.bright);
    EXPECT_NEAR(g.repeat_probability, 1.0, 1e-12);
    EXPECT_NEAR(e.repeat_probability, 1.0, 1e-12);
}

TEST(Spam, EveryHeraldSeedAgrees) {
    auto cfg = default_config();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        cfg.spam.seed = seed;
        EXPECT_FALSE(spam_protocol(spam_input_state("g"), cfg).bright) << seed;
        EXPECT_TRUE(spam_protocol(spam_input_state("e"), cfg).bright) << seed;
    }
}

TEST(Spam, SuperpositionHeraldsHalfTheTime) {
    auto cfg = default_config();
    auto r = spam_protocol(spam_input_state("plus"), cfg);
    EXPECT_NEAR(r.p_bright, 0.5, 1e-9);
    int bright = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        cfg.spam.seed = seed;
        bright += spam_protocol(spam_input_state("plus"), cfg).bright;
    }
    // Binomial(100, 1/2): five standard deviations is 25.
    EXPECT_NEAR(bright, 50, 25);
}

TEST(Spam, DeterministicForFixedSeed) {
    auto cfg = default_config();
    cfg.spam.seed = 42;
    auto a = spam_protocol(spam_input_state("plus"), cfg);
    auto b = spam_protocol(spam_input_state("plus"), cfg);
    EXPECT_EQ(a.measured_n, b.measured_n);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Spam, ShortDriveMakesThresholdAmbiguous) {
    auto cfg = default_config();
    cfg.spam.drive_time = 5e-6;
    try {
        spam_protocol(spam_input_state("g"), cfg);
        FAIL() << "expected AmbiguousThresholdError";
    } catch (const AmbiguousThresholdError &e) {
        EXPECT_LT(e.bright_mean - e.dark_mean, 1.0);
    }
}

TEST(Spam, ExplicitThresholdOverridesDefault) {
    auto cfg = default_config();
    auto r = spam_protocol(spam_input_state("e"), cfg, 200.0);
    EXPECT_DOUBLE_EQ(r.threshold, 200.0);
    EXPECT_TRUE(r.bright);
}

TEST(Spam, InputValidation) {
    auto cfg = default_config();
    EXPECT_THROW(spam_input_state("x"), ConfigError);
    EXPECT_THROW(spam_protocol(CVec::Ones(3), cfg), std::invalid_argument);
    EXPECT_THROW(spam_protocol(CVec::Ones(2).normalized(), cfg), std::invalid_argument);
}

TEST(Spam, JsonCarriesStepLog) {
    auto j = to_json(spam_protocol(spam_input_state("e"), default_config()));
    EXPECT_EQ(j["herald"], "bright");
    ASSERT_TRUE(j["log"].is_array());
    EXPECT_EQ(j["log"].size(), 5u);
    EXPECT_EQ(j["log"][0]["step"], "shelve");
    EXPECT_EQ(j["log"][4]["step"], "repeat");
}

TEST(DefaultThreshold, Rule) {
    EXPECT_DOUBLE_EQ(default_spam_threshold(10.0, 2.0), 40.0);
    EXPECT_DOUBLE_EQ(default_spam_threshold(1.0, 20.0), 100.0);
}

TEST(HeraldLoop, Bookkeeping) {
    EXPECT_EQ(herald_loop(1.0, 3, 10).attempts, 1);
    auto never = herald_loop(0.0, 3, 7);
    EXPECT_FALSE(never.success);
    EXPECT_EQ(never.attempts, 7);
    auto a = herald_loop(0.3, 11, 100), b = herald_loop(0.3, 11, 100);
    EXPECT_EQ(a.attempts, b.attempts);
    EXPECT_TRUE(a.success);
    EXPECT_THROW(herald_loop(1.5, 1, 1), std::invalid_argument);
}

}  // namespace
}  // namespace eggsim
