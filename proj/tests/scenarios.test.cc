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


#include "eggsim/scenarios.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "eggsim/derived.h"
#include "eggsim/errors.h"

namespace eggsim {
namespace {

constexpr double kPi = std::numbers::pi;

// Independent thermal occupation: 1 / (exp(hbar w / k T) - 1).
double bose(double temperature, double w) {
    const double hbar = 1.054571817e-34, kb = 1.380649e-23;
    return 1.0 / std::expm1(hbar * w / (kb * temperature));
}

TEST(FockCutoff, FloorRuleAndMonotone) {
    const double nbar = 9.93, alpha = 4.4;
    const auto floor_rule = static_cast<std::size_t>(std::ceil(1.5 * (nbar + alpha * alpha) + 10));
    std::size_t prev = 0;
    for (std::size_t n = 0; n < 120; ++n) {
        const auto c = member_fock_cutoff(n, alpha, nbar);
        EXPECT_GE(c, floor_rule);
        EXPECT_GE(c, n);
        EXPECT_GE(c, prev);
        prev = c;
    }
}

TEST(ThermalEnsemble, WeightsAndMean) {
    const double nbar = 2.0;
    auto ens = thermal_ensemble({level_vector(2, level_g)}, 2, nbar, 1e-8, 1.0);
    double total = 0, mean = 0;
    for (const auto &m : ens.members()) {
        total += m.weight;
        mean += m.weight * mean_phonons(m.state, 0);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(mean, nbar, 1e-5);
}

TEST(Heating, ShortRunFollowsQuadraticGrowth) {
    ExperimentConfig cfg;
    cfg.heating.temperature = 0.05e-3;
    cfg.heating.t_end = 20e-6;
    cfg.heating.samples = 5;
    auto r = heating_scenario(cfg);
    EXPECT_NEAR(r.nbar, bose(0.05e-3, cfg.trap.secular_frequency), 1e-9);
    const double rabi = rabi_frequency(cfg.molecule.dipole_moment, cfg.drive_amplitude, cfg.trap.field_radius);
    const double g = 2 * rabi * eta(1.0, cfg.molecule.mass, cfg.trap.secular_frequency, cfg.trap.field_radius);
    ASSERT_EQ(r.evolution.samples(), 5u);
    for (std::size_t k = 0; k < 5; ++k) {
        const double t = r.evolution.times[k];
        const double expect = r.nbar + g * g * t * t;
        EXPECT_NEAR(r.analytic[k], expect, 1e-12 * expect);
        EXPECT_NEAR(r.evolution.mean_n[k][0], expect, 0.02 * expect) << "t = " << t;
    }
    EXPECT_LT(r.evolution.max_norm_drift, 1e-6);
}

TEST(Heating, ZeroDurationGivesThermalMean) {
    ExperimentConfig cfg;
    cfg.heating.t_end = 0.0;
    auto r = heating_scenario(cfg);
    ASSERT_EQ(r.evolution.samples(), 1u);
    const double nbar = bose(cfg.heating.temperature, cfg.trap.secular_frequency);
    // Members beyond the 1e-4 weight tail are dropped and the rest renormalised.
    EXPECT_NEAR(r.evolution.mean_n[0][0], nbar, 0.005 * nbar);
}

TEST(Heating, InvalidSettingsRejected) {
    ExperimentConfig cfg;
    cfg.heating.t_end = -1.0;
    EXPECT_THROW(heating_scenario(cfg), ConfigError);
}

ExperimentConfig fast_gate() {
    ExperimentConfig cfg;
    cfg.gate.temperature = 0.0;
    cfg.ms.time_scale = 100.0;
    cfg.ms.theta_end = kPi / 2;
    cfg.ms.samples = 5;
    return cfg;
}

TEST(MsGate, CalibrationHitsTargetRate) {
    auto cfg = fast_gate();
    auto cal = calibrate_ms(cfg);
    const double rabi = rabi_frequency(cfg.molecule.dipole_moment, cfg.drive_amplitude, cfg.trap.field_radius);
    EXPECT_GT(cal.iterations, 0);
    EXPECT_NEAR(cal.measured_rate, cal.target_rate, 1e-3 * cal.target_rate);
    // Scaling Omega and gamma together scales the rate once.
    auto [com, rel] = two_ion_modes(cfg.trap);
    (void)rel;
    const double e = eta(com, 0, cfg.molecule, cfg.trap);
    const double s = cfg.ms.time_scale;
    EXPECT_NEAR(cal.target_rate, 2 * std::pow(s * rabi, 2) * e * e / (s * cfg.gate.detuning), 1e-9 * cal.target_rate);
}

TEST(MsGate, UnscaledOffsetStaysNearDetuning) {
    // With gamma << omega_q the counter-rotating shift is a small correction.
    ExperimentConfig cfg;
    auto cal = calibrate_ms(cfg);
    EXPECT_NEAR(cal.measured_rate, cal.target_rate, 1e-3 * cal.target_rate);
    EXPECT_NEAR(cal.offset, cfg.gate.detuning, 0.15 * cfg.gate.detuning);
    EXPECT_LT(cal.offset, cfg.gate.detuning);
}

TEST(MsGate, VacuumPopulationsFollowAngle) {
    auto r = ms_scenario(fast_gate());
    ASSERT_GE(r.evolution.samples(), 5u);
    for (std::size_t k = 0; k < r.evolution.samples(); ++k) {
        const double c2 = std::pow(std::cos(r.theta[k]), 2);
        EXPECT_NEAR(r.evolution.population(k, {level_g, level_g}), c2, 0.03) << k;
        EXPECT_NEAR(r.evolution.population(k, {level_e, level_e}), 1 - c2, 0.03) << k;
    }
    EXPECT_NEAR(r.theta[r.bell_sample], kPi / 4, 1e-12);
    EXPECT_GT(r.bell_fidelity, 0.97);
    EXPECT_NEAR(r.validity_ratio, 57.6, 0.5);
}

TEST(MsGate, FockScanAtBellPoint) {
    auto scan = ms_fock_scan(fast_gate(), {0, 3});
    ASSERT_EQ(scan.size(), 2u);
    for (const auto &e : scan) {
        EXPECT_NEAR(e.p_gg, 0.5, 0.05) << e.n;
        EXPECT_NEAR(e.p_ee, 0.5, 0.05) << e.n;
        EXPECT_GT(e.fidelity, 0.9) << e.n;
    }
}

}  // namespace
}  // namespace eggsim
