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


// Reference values are recomputed here from CODATA constants typed in by
// hand, not taken from the library's constants header.

#include "eggsim/derived.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "eggsim/errors.h"

namespace eggsim {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHbar = 1.054571817e-34;
constexpr double kBoltzmann = 1.380649e-23;
constexpr double kDebye = 3.33564095198152e-30;
constexpr double kAmu = 1.66053906660e-27;

constexpr double kDipole = 2.3 * kDebye;
constexpr double kMass = 45 * kAmu;
constexpr double kRadius = 0.5e-3;
constexpr double kVolts = 10.0;
constexpr double kOmegaQ = 2 * kPi * 1e6;
constexpr double kGamma = 2 * kPi * 200e3;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(Derived, RabiFrequency) {
    const double expected = kDipole * kVolts / (2 * kRadius * kHbar);
    EXPECT_LT(rel(rabi_frequency(kDipole, kVolts, kRadius), expected), 1e-9);
    EXPECT_LT(rel(rabi_frequency(kDipole, kVolts, kRadius), 7.275e8), 1e-3);
    EXPECT_LT(rel(rabi_frequency(kDipole, kVolts, kRadius) / (2 * kPi), 115.8e6), 1e-3);
}

TEST(Derived, GradientCoupling) {
    const double expected = std::sqrt(kHbar / (2 * kMass * kOmegaQ)) / kRadius;
    EXPECT_LT(rel(eta(1.0, kMass, kOmegaQ, kRadius), expected), 1e-9);
    EXPECT_LT(rel(eta(1.0, kMass, kOmegaQ, kRadius), 2.120e-5), 1e-3);
    EXPECT_LT(rel(eta(1 / std::sqrt(2.0), kMass, kOmegaQ, kRadius), expected / std::sqrt(2.0)), 1e-12);
}

TEST(Derived, GradientCouplingPerIon) {
    ExperimentConfig cfg;
    auto [com, rel_mode] = two_ion_modes(cfg.trap);
    EXPECT_DOUBLE_EQ(eta(com, 0, cfg.molecule, cfg.trap), eta(com, 1, cfg.molecule, cfg.trap));
    EXPECT_DOUBLE_EQ(eta(rel_mode, 0, cfg.molecule, cfg.trap), -eta(rel_mode, 1, cfg.molecule, cfg.trap));
    // eta scales as omega^(-1/2): the relative mode couples 3^(1/4) times harder.
    EXPECT_NEAR(
        eta(rel_mode, 0, cfg.molecule, cfg.trap) / eta(com, 0, cfg.molecule, cfg.trap), std::pow(3.0, 0.25), 1e-12);
    EXPECT_THROW(eta(com, 2, cfg.molecule, cfg.trap), std::out_of_range);
}

TEST(Derived, ThermalOccupation) {
    const double x = kHbar * kOmegaQ / (kBoltzmann * 0.5e-3);
    EXPECT_LT(rel(thermal_occupation(0.5e-3, kOmegaQ), 1 / (std::exp(x) - 1)), 1e-12);
    EXPECT_LT(rel(thermal_occupation(0.5e-3, kOmegaQ), 9.93), 1e-3);
    EXPECT_EQ(thermal_occupation(0.0, kOmegaQ), 0.0);
    // High temperature: kT / (hbar w) - 1/2.
    const double hot = 1.0;
    EXPECT_NEAR(thermal_occupation(hot, kOmegaQ), kBoltzmann * hot / (kHbar * kOmegaQ) - 0.5, 1e-3);
    EXPECT_THROW(thermal_occupation(-1, kOmegaQ), std::invalid_argument);
}

TEST(Derived, TwoIonModes) {
    TrapConfig trap;
    auto [com, r] = two_ion_modes(trap);
    EXPECT_DOUBLE_EQ(com.frequency, trap.secular_frequency);
    EXPECT_NEAR(r.frequency * std::sqrt(3.0), trap.secular_frequency, 1e-6);
    double dot = 0, n1 = 0, n2 = 0;
    for (int i = 0; i < 2; ++i) {
        dot += com.participation[i] * r.participation[i];
        n1 += com.participation[i] * com.participation[i];
        n2 += r.participation[i] * r.participation[i];
    }
    EXPECT_NEAR(dot, 0, 1e-15);
    EXPECT_NEAR(n1, 1, 1e-15);
    EXPECT_NEAR(n2, 1, 1e-15);
    trap.n_ions = 3;
    EXPECT_THROW(two_ion_modes(trap), ConfigError);
}

TEST(Derived, GateTime) {
    const double rabi = kDipole * kVolts / (2 * kRadius * kHbar);
    const double e = std::sqrt(kHbar / (2 * kMass * kOmegaQ)) / kRadius / std::sqrt(2.0);
    const double t = ms_gate_time(rabi, e, e, kGamma);
    EXPECT_LT(rel(t, kPi * kGamma / (2 * rabi * rabi * e * e)), 1e-12);
    EXPECT_LT(rel(t, 16.6e-3), 1e-3);
    EXPECT_NEAR(ms_angle(rabi, e, e, kGamma, t), kPi, 1e-12);
    EXPECT_NEAR(ms_angle(rabi, e, e, kGamma, t / 4), kPi / 4, 1e-12);
    EXPECT_THROW(ms_gate_time(rabi, 0, e, kGamma), std::invalid_argument);
    EXPECT_THROW(ms_gate_time(rabi, e, e, 0), std::invalid_argument);
}

TEST(Derived, CarrierToleranceInvertsTheBound) {
    const double rabi = kDipole * kVolts / (2 * kRadius * kHbar);
    const double tol = xeq_tolerance(1e-4, kOmegaQ, kGamma, kRadius, kVolts, kDipole);
    const double bound = carrier_phase_bound(rabi, tol, kRadius, kOmegaQ, kGamma);
    EXPECT_NEAR(bound * bound / 2, 1e-4, 1e-12);
    // Closed form hbar (w + g) r_o^2 / (200 sqrt2 V d).
    EXPECT_LT(rel(tol, kHbar * (kOmegaQ + kGamma) * kRadius * kRadius / (200 * std::sqrt(2.0) * kVolts * kDipole)), 1e-12);
    EXPECT_GT(tol, 1e-9);
    EXPECT_LT(tol, 1e-8);
}

TEST(Derived, QuadrupoleCarrierRate) {
    const double e = 1.602176634e-19, a0 = 5.29177210903e-11;
    const double r_o = 100e-6;
    const double rate = quadrupole_carrier_rate(kVolts, r_o);
    EXPECT_LT(rel(rate, e * a0 * a0 * 2 * kVolts / (kHbar * r_o * r_o)), 1e-12);
    EXPECT_GT(rate / (2 * kPi), 500.0);
    EXPECT_LT(rate / (2 * kPi), 2000.0);
    // Scales as 1 / r_o^2.
    EXPECT_NEAR(quadrupole_carrier_rate(kVolts, 2 * r_o) * 4, rate, 1e-9 * rate);
}

TEST(Derived, ValidityRatio) {
    const double rabi = kDipole * kVolts / (2 * kRadius * kHbar);
    const double e = std::sqrt(kHbar / (2 * kMass * kOmegaQ)) / kRadius / std::sqrt(2.0);
    EXPECT_NEAR(ms_validity_ratio(rabi, e, kGamma), kGamma / (2 * rabi * e), 1e-9);
    EXPECT_NEAR(ms_validity_ratio(rabi, e, kGamma), 57.6, 0.1);
    EXPECT_NEAR(ms_validity_ratio(rabi, -e, kGamma), ms_validity_ratio(rabi, e, kGamma), 1e-12);
}

}  // namespace
}  // namespace eggsim
