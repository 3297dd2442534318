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


#include "eggsim/fock.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "eggsim/errors.h"

namespace eggsim {
namespace {

// Coherent-state amplitude e^{-|a|^2/2} a^n / sqrt(n!), computed in log space.
cd coherent_amplitude(cd alpha, std::size_t n) {
    if (alpha == cd(0)) {
        return n == 0 ? 1.0 : 0.0;
    }
    const double logmag = -0.5 * std::norm(alpha) + n * std::log(std::abs(alpha)) - 0.5 * std::lgamma(n + 1.0);
    return std::polar(std::exp(logmag), n * std::arg(alpha));
}

TEST(HilbertSpace, LayoutPutsFirstFactorSlowest) {
    auto s = HilbertSpace::molecules(2, 3, {4, 5});
    EXPECT_EQ(s.dimension(), 3u * 3u * 4u * 5u);
    EXPECT_EQ(s.n_molecules(), 2u);
    EXPECT_EQ(s.n_modes(), 2u);
    EXPECT_EQ(s.levels(1), 3u);
    EXPECT_EQ(s.fock_dim(1), 5u);
    EXPECT_EQ(s.internal_dimension(), 9u);
    EXPECT_EQ(s.stride(s.mode_factor(1)), 1u);
    EXPECT_EQ(s.stride(s.mode_factor(0)), 5u);
    const std::size_t idx = ((2 * 3 + 1) * 4 + 3) * 5 + 4;
    EXPECT_EQ(s.digit(idx, s.internal_factor(0)), 2u);
    EXPECT_EQ(s.digit(idx, s.internal_factor(1)), 1u);
    EXPECT_EQ(s.digit(idx, s.mode_factor(0)), 3u);
    EXPECT_EQ(s.digit(idx, s.mode_factor(1)), 4u);
    EXPECT_EQ(tensor(HilbertSpace::molecules(1, 2, {}), HilbertSpace::molecules(0, 2, {3})).dimension(), 6u);
}

TEST(StateVector, NormIsChecked) {
    auto s = HilbertSpace::molecules(1, 2, {2});
    EXPECT_THROW(StateVector(s, CVec::Ones(4)), std::invalid_argument);
    EXPECT_THROW(StateVector(s, CVec::Zero(3)), std::invalid_argument);
    EXPECT_NO_THROW(StateVector::unchecked(s, CVec::Ones(4)));
}

TEST(StateVector, ProductStateIsKronecker) {
    auto s = HilbertSpace::molecules(1, 2, {3});
    CVec a(2), b(3);
    a << 0.6, cd(0, 0.8);
    b << 1 / std::sqrt(2.0), 0, cd(0, -1 / std::sqrt(2.0));
    auto psi = product_state(s, {a, b});
    for (int i = 0; i < 2; ++i) {
        for (int n = 0; n < 3; ++n) {
            EXPECT_NEAR(std::abs(psi.amplitudes()(3 * i + n) - a(i) * b(n)), 0, 1e-15);
        }
    }
}

TEST(Ladder, MatrixElementsAndCommutator) {
    const std::size_t d = 8;
    CMat a = lowering_matrix(d);
    for (std::size_t n = 1; n < d; ++n) {
        EXPECT_DOUBLE_EQ(a(n - 1, n).real(), std::sqrt(double(n)));
    }
    CMat comm = a * a.adjoint() - a.adjoint() * a;
    for (std::size_t n = 0; n + 1 < d; ++n) {
        EXPECT_NEAR(comm(n, n).real(), 1.0, 1e-14);
    }
    // Truncation artefact in the last level.
    EXPECT_NEAR(comm(d - 1, d - 1).real(), 1.0 - double(d), 1e-12);
    auto space = HilbertSpace::molecules(1, 2, {d});
    auto num = number_operator(space, 0);
    auto [lo, hi] = ladder(space, 0);
    EXPECT_NEAR((num.dense() - (hi * lo).dense()).norm(), 0, 1e-13);
}

TEST(Displacement, MatchesMatrixExponentialOfTruncatedGenerator) {
    const std::size_t d = 12;
    const cd alpha(0.7, -0.4);
    CMat a = lowering_matrix(d);
    CMat gen = alpha * a.adjoint() - std::conj(alpha) * a;
    CMat expected = gen.exp();
    EXPECT_LT((displacement_matrix(d, alpha) - expected).norm(), 1e-11);
}

TEST(Displacement, VacuumColumnIsCoherentState) {
    const std::size_t d = 80;
    const cd alpha(1.5, 2.0);
    CMat col = displaced_fock_columns(d, alpha, 1);
    for (std::size_t n = 0; n < 40; ++n) {
        EXPECT_NEAR(std::abs(col(n, 0) - coherent_amplitude(alpha, n)), 0, 1e-10) << n;
    }
}

TEST(Displacement, IsUnitaryAndComposes) {
    const std::size_t d = 60;
    const cd a(0.8, 0.1), b(-0.3, 0.9);
    CMat da = displacement_matrix(d, a), db = displacement_matrix(d, b);
    EXPECT_LT((da.adjoint() * da - CMat::Identity(d, d)).norm(), 1e-10);
    // D(b) D(a) = exp(i Im(b a*)) D(a + b), checked on low Fock columns.
    CMat lhs = db * da;
    CMat rhs = std::polar(1.0, std::imag(b * std::conj(a))) * displacement_matrix(d, a + b);
    EXPECT_LT((lhs - rhs).block(0, 0, 15, 15).norm(), 1e-10);
}

TEST(Displacement, GuardRejectsLargeDisplacements) {
    EXPECT_NO_THROW(check_displacement_guard(21, cd(3.0, 0), 0.5));
    EXPECT_THROW(check_displacement_guard(10, cd(3.0, 0), 0.5), TruncationError);
    EXPECT_THROW(displacement_matrix(10, cd(0, 3.0), 0.5), TruncationError);
}

TEST(CoherentVector, MeanPhononNumber) {
    const cd alpha(1.2, -0.5);
    auto v = coherent_vector(40, alpha);
    EXPECT_NEAR(v.norm(), 1.0, 1e-14);
    auto space = HilbertSpace::molecules(0, 2, {40});
    StateVector psi(space, v);
    EXPECT_NEAR(mean_phonons(psi, 0), std::norm(alpha), 1e-10);
    auto [lo, hi] = ladder(space, 0);
    EXPECT_NEAR(std::abs(expectation(psi, lo) - alpha), 0, 1e-10);
}

TEST(ThermalWeights, GeometricDistribution) {
    const double nbar = 9.93;
    auto w = thermal_fock_weights(nbar, 1e-4);
    double total = 0, mean = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        EXPECT_EQ(w[k].first, k);
        total += w[k].second;
        mean += w[k].first * w[k].second;
        if (k > 0) {
            EXPECT_NEAR(w[k].second / w[k - 1].second, nbar / (nbar + 1), 1e-12);
        }
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    // The discarded tail holds < 1e-4 of the weight; the kept part is
    // renormalised, so the mean sits slightly below nbar.
    EXPECT_LT(mean, nbar);
    EXPECT_GT(mean, nbar * 0.98);
    // Cut: smallest N with cumulative weight >= 1 - eps.
    const double q = nbar / (nbar + 1);
    const double n_cut = std::ceil(std::log(1e-4) / std::log(q)) - 1;
    EXPECT_EQ(double(w.size() - 1), n_cut);
    auto zero = thermal_fock_weights(0.0, 1e-4);
    ASSERT_EQ(zero.size(), 1u);
    EXPECT_EQ(zero[0].second, 1.0);
}

TEST(Pauli, AlgebraOnTheQubitPair) {
    CMat x = pauli_matrix(2, PauliAxis::x), y = pauli_matrix(2, PauliAxis::y), z = pauli_matrix(2, PauliAxis::z);
    EXPECT_LT((x * y - cd(0, 1) * z).norm(), 1e-15);
    EXPECT_LT((x * x - CMat::Identity(2, 2)).norm(), 1e-15);
    // |e> is the +1 eigenstate of Z and sigma+ raises g to e.
    EXPECT_DOUBLE_EQ(z(level_e, level_e).real(), 1.0);
    CMat up = pauli_matrix(2, PauliAxis::raising);
    EXPECT_DOUBLE_EQ(up(level_e, level_g).real(), 1.0);
    CMat x3 = pauli_matrix(3, PauliAxis::x);
    EXPECT_EQ(x3.row(level_a).norm(), 0.0);
    CVec plus = x_vector(2, +1);
    EXPECT_LT((x * plus - plus).norm(), 1e-15);
    CVec minus = x_vector(3, -1);
    EXPECT_LT((x3 * minus + minus).norm(), 1e-15);
}

TEST(Operator, EmbedAndTensorAgree) {
    auto s1 = HilbertSpace::molecules(1, 2, {});
    auto s2 = HilbertSpace::molecules(0, 2, {3});
    auto both = tensor(s1, s2);
    CMat z = pauli_matrix(2, PauliAxis::z);
    CMat a = lowering_matrix(3);
    auto lhs = tensor(Operator::from_dense(s1, z), Operator::from_dense(s2, a));
    auto rhs = embed(both, {{0, z}, {1, a}});
    EXPECT_LT((lhs.dense() - rhs.dense()).norm(), 1e-15);
    EXPECT_LT((lhs.adjoint().dense() - lhs.dense().adjoint()).norm(), 1e-15);
}

TEST(Observables, ReducedDensityOfProductState) {
    auto space = HilbertSpace::molecules(2, 2, {6});
    CVec a(2), b(2);
    a << 0.6, 0.8;
    b << cd(0, 1), 0;
    auto psi = product_state(space, {a, b, coherent_vector(6, 0.3)});
    CMat rho = reduced_internal_density(psi);
    CVec ab(4);
    ab << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
    EXPECT_LT((rho - ab * ab.adjoint()).norm(), 1e-14);
}

TEST(Observables, TopPopulationAndEnsembleAverages) {
    auto space = HilbertSpace::molecules(0, 2, {5});
    StateVector top(space, fock_vector(5, 4));
    StateVector low(space, fock_vector(5, 1));
    EXPECT_DOUBLE_EQ(top_fock_population(top, 0), 1.0);
    EXPECT_DOUBLE_EQ(top_fock_population(low, 0), 0.0);
    MixedEnsemble mix({{0.25, top}, {0.75, low}});
    EXPECT_NEAR(mean_phonons(mix, 0), 0.25 * 4 + 0.75 * 1, 1e-15);
    EXPECT_THROW(MixedEnsemble({{0.5, top}}), std::invalid_argument);
    EXPECT_EQ(dump_state(low).size(), 1u);
}

}  // namespace
}  // namespace eggsim
