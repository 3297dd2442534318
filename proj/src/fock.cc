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
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "eggsim/errors.h"

namespace eggsim {

// ---------------------------------------------------------------------------
// HilbertSpace

HilbertSpace::HilbertSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) {
        throw std::invalid_argument("HilbertSpace needs at least one factor");
    }
    strides_.assign(factors_.size(), 1);
    dimension_ = 1;
    for (std::size_t f = factors_.size(); f-- > 0;) {
        const auto &fac = factors_[f];
        if (fac.kind == FactorKind::internal && fac.dim != 2 && fac.dim != 3) {
            throw std::invalid_argument("internal factors must have 2 or 3 levels");
        }
        if (fac.kind == FactorKind::mode && fac.dim < 2) {
            throw std::invalid_argument("Fock factors need at least 2 levels");
        }
        strides_[f] = dimension_;
        dimension_ *= fac.dim;
    }
    for (std::size_t f = 0; f < factors_.size(); ++f) {
        (factors_[f].kind == FactorKind::internal ? internal_ : modes_).push_back(f);
    }
}

HilbertSpace HilbertSpace::molecules(std::size_t n_molecules, std::size_t levels, std::vector<std::size_t> fock_dims) {
    std::vector<Factor> f;
    for (std::size_t i = 0; i < n_molecules; ++i) {
        f.push_back({FactorKind::internal, levels});
    }
    for (auto d : fock_dims) {
        f.push_back({FactorKind::mode, d});
    }
    return HilbertSpace(std::move(f));
}

std::size_t HilbertSpace::internal_factor(std::size_t molecule) const {
    if (molecule >= internal_.size()) {
        throw std::out_of_range("molecule index " + std::to_string(molecule) + " out of range");
    }
    return internal_[molecule];
}

std::size_t HilbertSpace::mode_factor(std::size_t mode) const {
    if (mode >= modes_.size()) {
        throw std::out_of_range("mode index " + std::to_string(mode) + " out of range");
    }
    return modes_[mode];
}

std::size_t HilbertSpace::internal_dimension() const {
    std::size_t d = 1;
    for (auto f : internal_) {
        d *= factors_[f].dim;
    }
    return d;
}

HilbertSpace tensor(const HilbertSpace &a, const HilbertSpace &b) {
    auto f = a.factors();
    f.insert(f.end(), b.factors().begin(), b.factors().end());
    return HilbertSpace(std::move(f));
}

// ---------------------------------------------------------------------------
// States

StateVector::StateVector(HilbertSpace space, CVec amplitudes) : StateVector(std::move(space), std::move(amplitudes), true) {
}

StateVector::StateVector(HilbertSpace space, CVec amplitudes, bool check)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != space_.dimension()) {
        throw std::invalid_argument(
            "state has " + std::to_string(amps_.size()) + " amplitudes for a space of dimension " +
            std::to_string(space_.dimension()));
    }
    if (check && std::abs(amps_.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("state is not normalised: |psi| = " + std::to_string(amps_.norm()));
    }
}

StateVector StateVector::unchecked(HilbertSpace space, CVec amplitudes) {
    return StateVector(std::move(space), std::move(amplitudes), false);
}

StateVector product_state(const HilbertSpace &space, const std::vector<CVec> &locals) {
    const auto &factors = space.factors();
    if (locals.size() != factors.size()) {
        throw std::invalid_argument("product_state needs one local vector per factor");
    }
    CVec out = CVec::Ones(1);
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (static_cast<std::size_t>(locals[f].size()) != factors[f].dim) {
            throw std::invalid_argument("local vector size does not match factor " + std::to_string(f));
        }
        CVec next(out.size() * locals[f].size());
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            next.segment(i * locals[f].size(), locals[f].size()) = out[i] * locals[f];
        }
        out = std::move(next);
    }
    return StateVector(space, std::move(out));
}

CVec fock_vector(std::size_t dim, std::size_t n) {
    if (n >= dim) {
        throw TruncationError("Fock level " + std::to_string(n) + " needs n_max >= " + std::to_string(n));
    }
    CVec v = CVec::Zero(dim);
    v[n] = 1.0;
    return v;
}

CVec coherent_vector(std::size_t dim, cd alpha) {
    CVec v(dim);
    // log-space amplitudes alpha^n / sqrt(n!) keep large |alpha| finite.
    double r = std::abs(alpha);
    double phase = std::arg(alpha);
    for (std::size_t n = 0; n < dim; ++n) {
        double log_mag = -0.5 * r * r + (r > 0 ? n * std::log(r) : (n == 0 ? 0.0 : -INFINITY)) -
                         0.5 * std::lgamma(static_cast<double>(n) + 1.0);
        v[n] = std::polar(std::exp(log_mag), phase * static_cast<double>(n));
    }
    return v / v.norm();
}

CVec level_vector(std::size_t levels, std::size_t level) {
    if (level >= levels) {
        throw std::out_of_range("level index out of range");
    }
    CVec v = CVec::Zero(levels);
    v[level] = 1.0;
    return v;
}

CVec x_vector(std::size_t levels, int sign) {
    CVec v = CVec::Zero(levels);
    v[level_g] = 1.0 / std::sqrt(2.0);
    v[level_e] = (sign >= 0 ? 1.0 : -1.0) / std::sqrt(2.0);
    return v;
}

MixedEnsemble::MixedEnsemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
    if (members_.empty()) {
        throw std::invalid_argument("ensemble needs at least one member");
    }
    double total = 0;
    for (const auto &m : members_) {
        if (!(m.weight >= 0)) {
            throw std::invalid_argument("ensemble weights must be non-negative");
        }
        total += m.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("ensemble weights sum to " + std::to_string(total));
    }
}

// ---------------------------------------------------------------------------
// Operators

Operator::Operator(HilbertSpace space, SpMat matrix) : space_(std::move(space)), m_(std::move(matrix)) {
    auto d = static_cast<Eigen::Index>(space_.dimension());
    if (m_.rows() != d || m_.cols() != d) {
        throw std::invalid_argument("operator matrix does not match the space dimension");
    }
}

Operator Operator::identity(const HilbertSpace &space) {
    SpMat m(space.dimension(), space.dimension());
    m.setIdentity();
    return Operator(space, std::move(m));
}

Operator Operator::zero(const HilbertSpace &space) {
    return Operator(space, SpMat(space.dimension(), space.dimension()));
}

Operator Operator::from_dense(const HilbertSpace &space, const CMat &m, double prune) {
    SpMat s = m.sparseView(1.0, prune);
    return Operator(space, std::move(s));
}

namespace {

void require_same(const HilbertSpace &a, const HilbertSpace &b) {
    if (!(a == b)) {
        throw std::invalid_argument("operator/state space mismatch");
    }
}

SpMat kron(const SpMat &a, const SpMat &b) {
    std::vector<Eigen::Triplet<cd>> trips;
    trips.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
    for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
        for (SpMat::InnerIterator ia(a, r); ia; ++ia) {
            for (Eigen::Index s = 0; s < b.outerSize(); ++s) {
                for (SpMat::InnerIterator ib(b, s); ib; ++ib) {
                    trips.emplace_back(
                        ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(), ia.value() * ib.value());
                }
            }
        }
    }
    SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

}  // namespace

Operator Operator::adjoint() const {
    SpMat a = m_.adjoint();
    return Operator(space_, std::move(a));
}

Operator Operator::operator*(const Operator &rhs) const {
    require_same(space_, rhs.space_);
    SpMat p = m_ * rhs.m_;
    return Operator(space_, std::move(p));
}

Operator Operator::operator+(const Operator &rhs) const {
    require_same(space_, rhs.space_);
    SpMat s = m_ + rhs.m_;
    return Operator(space_, std::move(s));
}

Operator Operator::operator-(const Operator &rhs) const {
    require_same(space_, rhs.space_);
    SpMat s = m_ - rhs.m_;
    return Operator(space_, std::move(s));
}

Operator Operator::operator*(cd scale) const {
    SpMat s = m_ * scale;
    return Operator(space_, std::move(s));
}

StateVector Operator::apply(const StateVector &psi) const {
    require_same(space_, psi.space());
    CVec out = m_ * psi.amplitudes();
    return StateVector::unchecked(space_, std::move(out));
}

Operator embed(const HilbertSpace &space, const std::vector<std::pair<std::size_t, CMat>> &locals) {
    const auto &factors = space.factors();
    std::vector<const CMat *> by_factor(factors.size(), nullptr);
    for (const auto &[f, m] : locals) {
        if (f >= factors.size()) {
            throw std::out_of_range("embed: factor index out of range");
        }
        if (by_factor[f]) {
            throw std::invalid_argument("embed: factor listed twice");
        }
        if (static_cast<std::size_t>(m.rows()) != factors[f].dim || m.rows() != m.cols()) {
            throw std::invalid_argument("embed: local matrix size does not match factor");
        }
        by_factor[f] = &m;
    }
    SpMat out(1, 1);
    out.insert(0, 0) = 1.0;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        SpMat local;
        if (by_factor[f]) {
            local = by_factor[f]->sparseView();
        } else {
            local.resize(factors[f].dim, factors[f].dim);
            local.setIdentity();
        }
        out = kron(out, local);
    }
    return Operator(space, std::move(out));
}

Operator embed(const HilbertSpace &space, std::size_t factor, const CMat &local) {
    return embed(space, {{factor, local}});
}

CMat lowering_matrix(std::size_t dim) {
    CMat a = CMat::Zero(dim, dim);
    for (std::size_t n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

std::pair<Operator, Operator> ladder(const HilbertSpace &space, std::size_t mode) {
    auto f = space.mode_factor(mode);
    CMat a = lowering_matrix(space.factors()[f].dim);
    return {embed(space, f, a), embed(space, f, a.adjoint())};
}

Operator number_operator(const HilbertSpace &space, std::size_t mode) {
    auto f = space.mode_factor(mode);
    auto dim = space.factors()[f].dim;
    CMat n = CMat::Zero(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) {
        n(k, k) = static_cast<double>(k);
    }
    return embed(space, f, n);
}

// ---------------------------------------------------------------------------
// Displacement

namespace {

struct QuadratureEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

/// Eigendecomposition of a + a^dag on a dim-level factor, cached per dim.
std::shared_ptr<const QuadratureEigen> quadrature_eigen(std::size_t dim) {
    static std::mutex mu;
    static std::map<std::size_t, std::shared_ptr<const QuadratureEigen>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(dim);
        if (it != cache.end()) {
            return it->second;
        }
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd sub(dim - 1);
    for (std::size_t n = 1; n < dim; ++n) {
        sub[n - 1] = std::sqrt(static_cast<double>(n));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    auto entry = std::make_shared<QuadratureEigen>(QuadratureEigen{solver.eigenvalues(), solver.eigenvectors()});
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(dim, entry);
    return entry;
}

}  // namespace

void check_displacement_guard(std::size_t dim, cd alpha, double guard_factor) {
    double n_max = static_cast<double>(dim - 1);
    double a2 = std::norm(alpha);
    if (a2 > guard_factor * n_max) {
        auto required = static_cast<long long>(std::ceil(a2 / guard_factor));
        throw TruncationError(
            "displacement |alpha|^2 = " + std::to_string(a2) + " violates the truncation guard; needs n_max >= " +
            std::to_string(required) + " (have " + std::to_string(static_cast<long long>(n_max)) + ")");
    }
}

CMat displaced_fock_columns(std::size_t dim, cd alpha, std::size_t columns) {
    columns = std::min(columns, dim);
    auto eig = quadrature_eigen(dim);
    // D(alpha) = R D(i r) R^dag with R = exp(i phi n), alpha = r exp(i (phi + pi/2)),
    // and D(i r) = exp(i r (a + a^dag)).
    double r = std::abs(alpha);
    double phi = std::arg(alpha) - std::numbers::pi / 2;
    CMat rhs(dim, columns);
    for (std::size_t k = 0; k < dim; ++k) {
        cd ph = std::polar(1.0, r * eig->values[k]);
        for (std::size_t n = 0; n < columns; ++n) {
            rhs(k, n) = ph * eig->vectors(n, k);
        }
    }
    CMat out = eig->vectors.cast<cd>() * rhs;
    for (std::size_t m = 0; m < dim; ++m) {
        for (std::size_t n = 0; n < columns; ++n) {
            out(m, n) *= std::polar(1.0, phi * (static_cast<double>(m) - static_cast<double>(n)));
        }
    }
    return out;
}

CMat displacement_matrix(std::size_t dim, cd alpha, double guard_factor) {
    check_displacement_guard(dim, alpha, guard_factor);
    return displaced_fock_columns(dim, alpha, dim);
}

Operator displacement(const HilbertSpace &space, std::size_t mode, cd alpha, double guard_factor) {
    auto f = space.mode_factor(mode);
    return embed(space, f, displacement_matrix(space.factors()[f].dim, alpha, guard_factor));
}

std::vector<std::pair<std::size_t, double>> thermal_fock_weights(double nbar, double epsilon) {
    if (!(nbar >= 0) || !(epsilon > 0 && epsilon < 1)) {
        throw std::invalid_argument("thermal_fock_weights needs nbar >= 0 and 0 < epsilon < 1");
    }
    std::vector<std::pair<std::size_t, double>> out;
    double ratio = nbar / (nbar + 1.0);
    double p = 1.0 / (nbar + 1.0);
    double cumulative = 0;
    for (std::size_t n = 0;; ++n) {
        out.emplace_back(n, p);
        cumulative += p;
        if (cumulative >= 1.0 - epsilon || p == 0) {
            break;
        }
        p *= ratio;
    }
    for (auto &[n, w] : out) {
        w /= cumulative;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pauli / tensor / expectation

CMat pauli_matrix(std::size_t levels, PauliAxis axis, std::size_t low, std::size_t high) {
    if (low >= levels || high >= levels || low == high) {
        throw std::out_of_range("pauli_matrix: bad level pair");
    }
    const cd i(0, 1);
    CMat m = CMat::Zero(levels, levels);
    switch (axis) {
        case PauliAxis::x:
            m(high, low) = 1.0;
            m(low, high) = 1.0;
            break;
        case PauliAxis::y:
            m(high, low) = -i;
            m(low, high) = i;
            break;
        case PauliAxis::z:
            m(high, high) = 1.0;
            m(low, low) = -1.0;
            break;
        case PauliAxis::raising:
            m(high, low) = 1.0;
            break;
        case PauliAxis::lowering:
            m(low, high) = 1.0;
            break;
    }
    return m;
}

Operator pauli(const HilbertSpace &space, std::size_t molecule, PauliAxis axis) {
    auto f = space.internal_factor(molecule);
    return embed(space, f, pauli_matrix(space.factors()[f].dim, axis));
}

Operator tensor(const Operator &a, const Operator &b) {
    return Operator(tensor(a.space(), b.space()), kron(a.matrix(), b.matrix()));
}

cd expectation(const StateVector &psi, const Operator &op) {
    require_same(psi.space(), op.space());
    return psi.amplitudes().dot(op.matrix() * psi.amplitudes());
}

cd expectation(const MixedEnsemble &ensemble, const Operator &op) {
    cd total = 0;
    for (const auto &m : ensemble.members()) {
        total += m.weight * expectation(m.state, op);
    }
    return total;
}

double mean_phonons(const StateVector &psi, std::size_t mode) {
    const auto &space = psi.space();
    auto f = space.mode_factor(mode);
    const auto &amps = psi.amplitudes();
    double total = 0;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        total += std::norm(amps[i]) * static_cast<double>(space.digit(i, f));
    }
    return total;
}

double mean_phonons(const MixedEnsemble &ensemble, std::size_t mode) {
    double total = 0;
    for (const auto &m : ensemble.members()) {
        total += m.weight * mean_phonons(m.state, mode);
    }
    return total;
}

CMat reduced_internal_density(const StateVector &psi) {
    const auto &space = psi.space();
    const auto &factors = space.factors();
    std::size_t kept_dim = space.internal_dimension();
    std::size_t traced_dim = space.dimension() / kept_dim;
    CMat m = CMat::Zero(kept_dim, traced_dim);
    const auto &amps = psi.amplitudes();
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        std::size_t k = 0;
        std::size_t r = 0;
        for (std::size_t f = 0; f < factors.size(); ++f) {
            auto d = space.digit(i, f);
            if (factors[f].kind == FactorKind::internal) {
                k = k * factors[f].dim + d;
            } else {
                r = r * factors[f].dim + d;
            }
        }
        m(k, r) = amps[i];
    }
    return m * m.adjoint();
}

double top_fock_population(const StateVector &psi, std::size_t mode, std::size_t levels) {
    const auto &space = psi.space();
    auto f = space.mode_factor(mode);
    auto dim = space.factors()[f].dim;
    const auto &amps = psi.amplitudes();
    double total = 0;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        if (space.digit(i, f) + levels >= dim) {
            total += std::norm(amps[i]);
        }
    }
    return total;
}

nlohmann::json dump_state(const StateVector &psi, double cutoff) {
    auto out = nlohmann::json::array();
    const auto &amps = psi.amplitudes();
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        if (std::abs(amps[i]) > cutoff) {
            out.push_back({i, amps[i].real(), amps[i].imag()});
        }
    }
    return out;
}

}  // namespace eggsim
