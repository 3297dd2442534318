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


#include "eggsim/evolve.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "eggsim/errors.h"
#include "eggsim/gates.h"

namespace eggsim {
namespace {

constexpr double kPi = std::numbers::pi;

EvolveOptions sampled(double t_end, int samples) {
    auto o = EvolveOptions::uniform(t_end, samples);
    o.step.max_phase_per_step = 0.01;
    return o;
}

TEST(Evolve, ResonantRabiFlop) {
    auto space = HilbertSpace::molecules(1, 2, {});
    const double rabi = 2 * kPi * 1e6;
    auto h = build_E1(space, rabi, 0.0, 0.0);
    StateVector g(space, level_vector(2, level_g));
    auto r = evolve(h, g, sampled(1.5e-6, 31));
    for (std::size_t k = 0; k < r.samples(); ++k) {
        const double expected = std::pow(std::sin(rabi * r.times[k] / 2), 2);
        EXPECT_NEAR(r.population(k, {level_e}), expected, 1e-8) << r.times[k];
    }
    EXPECT_LT(r.max_norm_drift, 1e-8);
}

TEST(Evolve, DetunedRabiFlop) {
    auto space = HilbertSpace::molecules(1, 2, {});
    const double rabi = 2 * kPi * 1e6, delta = 2 * kPi * 0.7e6;
    auto h = build_E1(space, rabi, delta, 0.3);
    StateVector g(space, level_vector(2, level_g));
    auto r = evolve(h, g, sampled(2e-6, 21));
    const double w = std::hypot(rabi, delta);
    for (std::size_t k = 0; k < r.samples(); ++k) {
        const double expected = rabi * rabi / (w * w) * std::pow(std::sin(w * r.times[k] / 2), 2);
        EXPECT_NEAR(r.population(k, {level_e}), expected, 1e-8);
    }
}

TEST(Evolve, FreeOscillatorRotatesCoherentState) {
    MoleculeConfig mol;
    TrapConfig trap;
    ModeSpec mode{2 * kPi * 1e6, {1.0}};
    const std::size_t d = 30;
    auto space = HilbertSpace::molecules(1, 2, {d});
    DriveTone off{Geometry::quadrupole, mol.splitting, 0.0, 0.0};
    auto h = build_E2(space, {off}, {mode}, mol, trap, Frame::spin);
    const cd alpha(1.0, 0.5);
    auto psi0 = product_state(space, {level_vector(2, level_g), coherent_vector(d, alpha)});
    const double t = 0.37e-6;
    auto psi = propagate(h, psi0, 0.0, t, StepPolicy{});
    auto [lo, hi] = ladder(space, 0);
    const cd expected = alpha * std::polar(1.0, -mode.frequency * t);
    EXPECT_NEAR(std::abs(expectation(psi, lo) - expected), 0, 1e-6);
}

TEST(Evolve, EffectiveDriveMatchesClosedFormDisplacement) {
    const std::size_t d = 40;
    auto space = HilbertSpace::molecules(1, 2, {d});
    const double rabi = 1e6, eta_q = 0.5;
    auto h = build_bichromatic_effective(space, rabi, {eta_q});
    auto psi0 = product_state(space, {x_vector(2, +1), fock_vector(d, 0)});
    const double t = 2e-6;
    auto r = evolve(h, psi0, sampled(t, 5));
    for (std::size_t k = 0; k < r.samples(); ++k) {
        const double a = 2 * rabi * eta_q * r.times[k];
        EXPECT_NEAR(r.mean_n[k][0], a * a, 1e-7 * (1 + a * a));
    }
    auto closed = u_displacement(space, rabi, eta_q, t).apply(psi0);
    EXPECT_NEAR(std::abs(closed.amplitudes().dot(r.final_states[0].amplitudes())), 1.0, 1e-8);
}

TEST(Evolve, InternalFrameAgreesWithPlainIntegration) {
    MoleculeConfig mol;
    TrapConfig trap;
    trap.x_eq = 20e-6;  // large carrier next to a weak sideband
    ModeSpec mode{2 * kPi * 1e6, {1.0}};
    const std::size_t d = 8;
    auto space = HilbertSpace::molecules(1, 2, {d});
    std::vector<DriveTone> tones{
        {Geometry::quadrupole, mol.splitting - mode.frequency, 10.0, 0.0},
        {Geometry::quadrupole, mol.splitting + mode.frequency, 10.0, 0.0}};
    auto h = build_E2(space, tones, {mode}, mol, trap, Frame::full);
    auto psi0 = product_state(space, {level_vector(2, level_g), fock_vector(d, 1)});
    auto opts = sampled(0.5e-6, 3);
    opts.step.internal_frame = true;
    auto framed = evolve(h, psi0, opts);
    opts.step.internal_frame = false;
    auto plain = evolve(h, psi0, opts);
    const cd overlap = framed.final_states[0].amplitudes().dot(plain.final_states[0].amplitudes());
    EXPECT_NEAR(std::abs(overlap), 1.0, 1e-8);
    EXPECT_NEAR(std::arg(overlap), 0.0, 1e-6);
    EXPECT_NEAR(framed.mean_n[2][0], plain.mean_n[2][0], 1e-7);
    EXPECT_LT(framed.steps, plain.steps);
}

TEST(Evolve, NormGuardTrips) {
    auto space = HilbertSpace::molecules(1, 2, {});
    auto h = build_E1(space, 1e6, 0.0, 0.0);
    StateVector g(space, level_vector(2, level_g));
    auto o = EvolveOptions::uniform(1e-4, 2);
    o.step.max_phase_per_step = 3.5;  // outside RK4's stable range on the imaginary axis
    o.step.steps_per_period = 1e-3;
    o.step.internal_frame = false;  // the exact frame would absorb the whole drive
    EXPECT_THROW(evolve(h, g, o), NormDriftError);
    o.throw_on_norm_drift = false;
    auto r = evolve(h, g, o);
    EXPECT_TRUE(r.norm_flagged);
}

TEST(Evolve, TruncationGuardTrips) {
    const std::size_t d = 6;
    auto space = HilbertSpace::molecules(1, 2, {d});
    auto h = build_bichromatic_effective(space, 1e6, {0.5});
    auto psi0 = product_state(space, {x_vector(2, +1), fock_vector(d, 0)});
    EXPECT_THROW(evolve(h, psi0, sampled(3e-6, 4)), TruncationError);
}

TEST(Evolve, ConvergenceCheckReportsSmallChange) {
    auto space = HilbertSpace::molecules(1, 2, {});
    auto h = build_E1(space, 2 * kPi * 1e6, 2 * kPi * 0.2e6, 0.0);
    StateVector g(space, level_vector(2, level_g));
    auto o = sampled(1e-6, 5);
    o.convergence_check = true;
    auto r = evolve(h, g, o);
    ASSERT_TRUE(r.convergence_delta.has_value());
    EXPECT_LT(*r.convergence_delta, 1e-8);
}

TEST(Evolve, EnsembleIsWeightedAverageOfMembers) {
    const std::size_t d = 20;
    auto space = HilbertSpace::molecules(1, 2, {d});
    auto h = build_bichromatic_effective(space, 1e6, {0.3});
    auto a = product_state(space, {level_vector(2, level_g), fock_vector(d, 0)});
    auto b = product_state(space, {level_vector(2, level_g), fock_vector(d, 2)});
    auto o = sampled(1e-6, 3);
    auto ens = evolve_ensemble(h, MixedEnsemble({{0.3, a}, {0.7, b}}), o);
    auto ra = evolve(h, a, o), rb = evolve(h, b, o);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(ens.mean_n[k][0], 0.3 * ra.mean_n[k][0] + 0.7 * rb.mean_n[k][0], 1e-12);
        EXPECT_LT((ens.internal_density[k] - (0.3 * ra.internal_density[k] + 0.7 * rb.internal_density[k])).norm(), 1e-12);
    }
    // Both members start in |g>: an X-coupled displacement from |n> adds |2 Omega eta t|^2.
    const double alpha = 2 * 1e6 * 0.3 * 1e-6;
    EXPECT_NEAR(ens.mean_n[2][0], 0.7 * 2 + alpha * alpha, 1e-6);
}

TEST(Evolve, ThreadedEnsembleMatchesSerial) {
    const std::size_t d = 16;
    auto space = HilbertSpace::molecules(1, 2, {d});
    auto h = build_bichromatic_effective(space, 1e6, {0.2});
    std::vector<EnsembleMember> members;
    for (std::size_t n = 0; n < 4; ++n) {
        members.push_back({0.25, product_state(space, {level_vector(2, level_g), fock_vector(d, n)})});
    }
    MixedEnsemble ens(members);
    auto o = sampled(1e-6, 2);
    auto serial = evolve_ensemble(h, ens, o);
    o.threads = 3;
    auto threaded = evolve_ensemble(h, ens, o);
    EXPECT_EQ(serial.mean_n, threaded.mean_n);
}

TEST(StepPolicy, BoundsAndHalving) {
    auto space = HilbertSpace::molecules(1, 2, {});
    auto h = build_E1(space, 1e6, 2e6, 0.0);
    StepPolicy p;
    const double dt = p.step_bound(h);
    EXPECT_LE(dt, p.max_phase_per_step / h.norm_bound() * (1 + 1e-12));
    EXPECT_LE(dt, 2 * kPi / 2e6 / p.steps_per_period * (1 + 1e-12));
    EXPECT_NEAR(p.halved().step_bound(h), dt / 2, 1e-15);
}

}  // namespace
}  // namespace eggsim
