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


#include "eggsim/config.h"

#include <cmath>
#include <numbers>
#include <string>

#include <gtest/gtest.h>

#include "eggsim/errors.h"

namespace eggsim {
namespace {

using nlohmann::json;

constexpr double kTwoPi = 2 * std::numbers::pi;

TEST(ParseQuantity, NumbersAreSi) {
    EXPECT_DOUBLE_EQ(parse_quantity(json(3.5), Dimension::length), 3.5);
    EXPECT_DOUBLE_EQ(parse_quantity(json("3.5"), Dimension::length), 3.5);
}

TEST(ParseQuantity, OrdinaryFrequencyBecomesAngular) {
    EXPECT_DOUBLE_EQ(parse_quantity(json("1 MHz"), Dimension::angular_frequency), kTwoPi * 1e6);
    EXPECT_DOUBLE_EQ(parse_quantity(json("200 kHz"), Dimension::angular_frequency), kTwoPi * 2e5);
    EXPECT_DOUBLE_EQ(parse_quantity(json("5 rad/s"), Dimension::angular_frequency), 5.0);
}

TEST(ParseQuantity, LengthsTimesAndDipoles) {
    EXPECT_DOUBLE_EQ(parse_quantity(json("0.5 mm"), Dimension::length), 0.5e-3);
    EXPECT_DOUBLE_EQ(parse_quantity(json("10 um"), Dimension::length), 1e-5);
    EXPECT_DOUBLE_EQ(parse_quantity(json("100 us"), Dimension::time), 1e-4);
    // 1 D = 1e-21 / c C m.
    EXPECT_NEAR(parse_quantity(json("2.3 D"), Dimension::dipole), 2.3 * 1e-21 / 299792458.0, 1e-40);
    EXPECT_NEAR(parse_quantity(json("45 amu"), Dimension::mass), 45 * 1.66053906660e-27, 1e-36);
    EXPECT_DOUBLE_EQ(parse_quantity(json("0.5 pi"), Dimension::angle), std::numbers::pi / 2);
}

TEST(ParseQuantity, RejectsUnknownUnitsAndJunk) {
    EXPECT_THROW(parse_quantity(json("1 furlong"), Dimension::length), ConfigError);
    EXPECT_THROW(parse_quantity(json("1 MHz"), Dimension::length), ConfigError);
    EXPECT_THROW(parse_quantity(json("fast"), Dimension::time), ConfigError);
    EXPECT_THROW(parse_quantity(json::array(), Dimension::time), ConfigError);
}

TEST(Config, DefaultsAreValid) {
    ExperimentConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    auto modes = cfg.resolved_modes();
    ASSERT_EQ(modes.size(), 2u);
    EXPECT_DOUBLE_EQ(modes[1].frequency, cfg.trap.secular_frequency / std::sqrt(3.0));
}

TEST(Config, EmptyDocumentGivesDefaults) {
    auto cfg = config_from_json(json::object());
    EXPECT_EQ(config_to_json(cfg), config_to_json(ExperimentConfig{}));
}

TEST(Config, RoundTripThroughJson) {
    json doc = {
        {"trap", {{"x_eq", "5 um"}, {"field_radius", "100 um"}}},
        {"heating", {{"mismatch", 0.05}, {"samples", 3}}},
        {"ms", {{"fock_states", {0, 1, 5}}, {"time_scale", 20}}},
        {"spam", {{"input", "plus"}}},
        {"numerics", {{"threads", 2}}}};
    auto cfg = config_from_json(doc);
    EXPECT_DOUBLE_EQ(cfg.trap.x_eq, 5e-6);
    EXPECT_DOUBLE_EQ(cfg.heating.mismatch, 0.05);
    auto again = config_from_json(config_to_json(cfg));
    EXPECT_EQ(config_to_json(again), config_to_json(cfg));
}

TEST(Config, ExplicitModesRoundTrip) {
    json doc = {
        {"trap", {{"n_ions", 1}}},
        {"modes", {{{"frequency", "1 MHz"}, {"participation", {1.0}}}}}};
    auto cfg = config_from_json(doc);
    ASSERT_TRUE(cfg.modes.has_value());
    EXPECT_EQ(cfg.resolved_modes().size(), 1u);
    EXPECT_EQ(config_to_json(config_from_json(config_to_json(cfg))), config_to_json(cfg));
}

TEST(Config, UnknownSectionsAndKeysAreRejected) {
    EXPECT_THROW(config_from_json(json{{"lasers", json::object()}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"trap", {{"x_eqq", 0}}}}), ConfigError);
    EXPECT_THROW(config_from_json(json::array()), ConfigError);
    EXPECT_THROW(config_from_json(json{{"trap", {{"n_ions", "two"}}}}), ConfigError);
}

TEST(Config, InvariantViolations) {
    auto bad = [](json doc) { EXPECT_THROW(config_from_json(doc), ConfigError) << doc.dump(); };
    bad({{"drive", {{"amplitude", -1}}}});
    bad({{"trap", {{"field_radius", 0}}}});
    bad({{"trap", {{"secular_frequency", -1}}}});
    bad({{"molecule", {{"splitting", "50 MHz"}}}});  // only 50x the COM frequency
    bad({{"molecule", {{"dipole_moment", 0}}}});
    bad({{"heating", {{"mismatch", 1.0}}}});
    bad({{"heating", {{"samples", 0}}}});
    bad({{"gate", {{"target_mode", 2}}}});
    bad({{"gate", {{"detuning", 0}}}});
    bad({{"spam", {{"input", "x"}}}});
    bad({{"ultrafast", {{"n_pulses", 3}}}});
    bad({{"numerics", {{"threads", 0}}}});
    bad({{"trap", {{"n_ions", 1}}}, {"modes", {{{"frequency", "1 MHz"}, {"participation", {0.5}}}}}});
    bad({{"trap", {{"n_ions", 2}}},
         {"modes",
          {{{"frequency", "1 MHz"}, {"participation", {1.0, 0.0}}},
           {{"frequency", "2 MHz"}, {"participation", {0.6, 0.8}}}}}});
}

TEST(Override, DottedKeysCreateNestedValues) {
    json doc = json::object();
    apply_override(doc, "trap.x_eq=10 um");
    apply_override(doc, "heating.samples=5");
    apply_override(doc, "ms.calibrate=false");
    EXPECT_EQ(doc["trap"]["x_eq"], "10 um");
    EXPECT_EQ(doc["heating"]["samples"], 5);
    EXPECT_EQ(doc["ms"]["calibrate"], false);
    auto cfg = config_from_json(doc);
    EXPECT_DOUBLE_EQ(cfg.trap.x_eq, 1e-5);
    EXPECT_EQ(cfg.heating.samples, 5);
    EXPECT_FALSE(cfg.ms.calibrate);
}

TEST(Override, ReplacesExistingValue) {
    json doc = {{"drive", {{"amplitude", 10}}}};
    apply_override(doc, "drive.amplitude=20");
    EXPECT_EQ(doc["drive"]["amplitude"], 20);
}

TEST(Override, MalformedAssignments) {
    json doc = {{"trap", 3}};
    EXPECT_THROW(apply_override(doc, "noequals"), ConfigError);
    EXPECT_THROW(apply_override(doc, "=3"), ConfigError);
    EXPECT_THROW(apply_override(doc, "a..b=3"), ConfigError);
    EXPECT_THROW(apply_override(doc, "trap.x_eq=3"), ConfigError);
}

TEST(LoadConfig, BundledParameterFile) {
    auto cfg = load_config(std::string(EGGSIM_SOURCE_DIR) + "/configs/reference.json");
    EXPECT_DOUBLE_EQ(cfg.trap.secular_frequency, kTwoPi * 1e6);
    EXPECT_DOUBLE_EQ(cfg.trap.field_radius, 0.5e-3);
    EXPECT_DOUBLE_EQ(cfg.drive_amplitude, 10.0);
    EXPECT_DOUBLE_EQ(cfg.gate.detuning, kTwoPi * 200e3);
}

TEST(LoadConfig, MissingAndMalformedFiles) {
    EXPECT_THROW(load_config("/nonexistent/eggsim.json"), ConfigError);
    auto path = ::testing::TempDir() + "/broken.json";
    {
        std::FILE *f = std::fopen(path.c_str(), "w");
        std::fputs("{\"trap\": ", f);
        std::fclose(f);
    }
    EXPECT_THROW(load_config(path), ConfigError);
}

}  // namespace
}  // namespace eggsim
