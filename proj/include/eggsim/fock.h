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

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "json.hpp"

namespace eggsim {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<cd, Eigen::RowMajor>;

// Internal level labels. |g> is the -1 eigenstate of sigma_Z, |e> the +1.
inline constexpr std::size_t level_g = 0;
inline constexpr std::size_t level_e = 1;
inline constexpr std::size_t level_a = 2;

enum class FactorKind { internal, mode };

struct Factor {
    FactorKind kind;
    std::size_t dim;
    bool operator==(const Factor &) const = default;
};

/// Tensor product of internal (molecule) and motional (Fock) factors.
///
/// Basis ordering: factors in declared order, the first factor varying
/// slowest. Spaces built with `molecules()` put every internal factor before
/// every mode, so a basis index reads (internal_1, ..., internal_k, n_1, ..., n_m).
class HilbertSpace {
   public:
    HilbertSpace() = default;
    explicit HilbertSpace(std::vector<Factor> factors);

    /// n_molecules internal factors of `levels` (2 or 3) each, then one Fock
    /// factor per entry of fock_dims (each entry is n_max + 1).
    static HilbertSpace molecules(std::size_t n_molecules, std::size_t levels, std::vector<std::size_t> fock_dims);

    const std::vector<Factor> &factors() const { return factors_; }
    std::size_t dimension() const { return dimension_; }
    std::size_t n_molecules() const { return internal_.size(); }
    std::size_t n_modes() const { return modes_.size(); }
    /// Factor position of molecule i / mode p.
    std::size_t internal_factor(std::size_t molecule) const;
    std::size_t mode_factor(std::size_t mode) const;
    std::size_t levels(std::size_t molecule) const { return factors_[internal_factor(molecule)].dim; }
    std::size_t fock_dim(std::size_t mode) const { return factors_[mode_factor(mode)].dim; }
    std::size_t internal_dimension() const;
    /// Distance in flat index between neighbours of one factor.
    std::size_t stride(std::size_t factor) const { return strides_[factor]; }
    std::size_t digit(std::size_t index, std::size_t factor) const {
        return (index / strides_[factor]) % factors_[factor].dim;
    }

    bool operator==(const HilbertSpace &other) const { return factors_ == other.factors_; }

   private:
    std::vector<Factor> factors_;
    std::vector<std::size_t> strides_;
    std::vector<std::size_t> internal_;
    std::vector<std::size_t> modes_;
    std::size_t dimension_ = 0;
};

HilbertSpace tensor(const HilbertSpace &a, const HilbertSpace &b);

class StateVector {
   public:
    /// Throws std::invalid_argument unless the dimension matches and the
    /// norm is 1 to within 1e-9.
    StateVector(HilbertSpace space, CVec amplitudes);
    /// No norm check; for propagated states whose drift is tracked elsewhere.
    static StateVector unchecked(HilbertSpace space, CVec amplitudes);

    const HilbertSpace &space() const { return space_; }
    const CVec &amplitudes() const { return amps_; }
    double norm() const { return amps_.norm(); }

   private:
    StateVector(HilbertSpace space, CVec amplitudes, bool check);
    HilbertSpace space_;
    CVec amps_;
};

/// Product state from one local vector per factor, in factor order.
StateVector product_state(const HilbertSpace &space, const std::vector<CVec> &locals);

CVec fock_vector(std::size_t dim, std::size_t n);
/// Truncated coherent state, renormalised on the retained levels.
CVec coherent_vector(std::size_t dim, cd alpha);
CVec level_vector(std::size_t levels, std::size_t level);
/// (|g> + sign |e>)/sqrt2 inside a 2- or 3-level factor.
CVec x_vector(std::size_t levels, int sign);

struct EnsembleMember {
    double weight;
    StateVector state;
};

/// Weighted list of pure states standing in for a mixed state. Members may
/// live in differently truncated spaces; every observable here is linear in
/// the density matrix, so averaging member expectations is exact.
class MixedEnsemble {
   public:
    explicit MixedEnsemble(std::vector<EnsembleMember> members);
    const std::vector<EnsembleMember> &members() const { return members_; }

   private:
    std::vector<EnsembleMember> members_;
};

class Operator {
   public:
    Operator(HilbertSpace space, SpMat matrix);
    static Operator identity(const HilbertSpace &space);
    static Operator zero(const HilbertSpace &space);
    static Operator from_dense(const HilbertSpace &space, const CMat &m, double prune = 0.0);

    const HilbertSpace &space() const { return space_; }
    const SpMat &matrix() const { return m_; }
    CMat dense() const { return CMat(m_); }

    Operator adjoint() const;
    Operator operator*(const Operator &rhs) const;
    Operator operator+(const Operator &rhs) const;
    Operator operator-(const Operator &rhs) const;
    Operator operator*(cd scale) const;
    StateVector apply(const StateVector &psi) const;

   private:
    HilbertSpace space_;
    SpMat m_;
};

/// Identity on every factor except the listed ones, which carry the given
/// local matrices. Factors must be distinct.
Operator embed(const HilbertSpace &space, const std::vector<std::pair<std::size_t, CMat>> &locals);
Operator embed(const HilbertSpace &space, std::size_t factor, const CMat &local);

/// a|n> = sqrt(n)|n-1> on a dim-level Fock factor.
CMat lowering_matrix(std::size_t dim);
/// (a, a^dagger) acting on `mode`.
std::pair<Operator, Operator> ladder(const HilbertSpace &space, std::size_t mode);
Operator number_operator(const HilbertSpace &space, std::size_t mode);

/// Truncation guard: |alpha|^2 <= guard_factor * n_max. Throws
/// TruncationError naming the required n_max otherwise.
void check_displacement_guard(std::size_t dim, cd alpha, double guard_factor);

/// exp(alpha a^dag - alpha* a) on a dim-level factor, exact for the
/// truncated generator (via the eigenbasis of a + a^dag).
CMat displacement_matrix(std::size_t dim, cd alpha, double guard_factor = 0.5);
/// First `columns` columns of displacement_matrix, i.e. D(alpha)|n> for n < columns.
CMat displaced_fock_columns(std::size_t dim, cd alpha, std::size_t columns);
Operator displacement(const HilbertSpace &space, std::size_t mode, cd alpha, double guard_factor = 0.5);

/// Thermal Fock weights p_n = nbar^n / (nbar + 1)^(n + 1) for n = 0..N, with
/// N the smallest cut whose cumulative weight reaches 1 - epsilon, then
/// renormalised.
std::vector<std::pair<std::size_t, double>> thermal_fock_weights(double nbar, double epsilon);

enum class PauliAxis { x, y, z, raising, lowering };

/// Pauli matrix on the (low, high) pair of a `levels`-level factor, with
/// sigma_+ = |high><low| and sigma_Z = |high><high| - |low><low|. Other
/// levels are untouched (zero rows/columns, identity for z is not implied).
CMat pauli_matrix(std::size_t levels, PauliAxis axis, std::size_t low = level_g, std::size_t high = level_e);
Operator pauli(const HilbertSpace &space, std::size_t molecule, PauliAxis axis);

Operator tensor(const Operator &a, const Operator &b);

cd expectation(const StateVector &psi, const Operator &op);
cd expectation(const MixedEnsemble &ensemble, const Operator &op);
double mean_phonons(const StateVector &psi, std::size_t mode);
double mean_phonons(const MixedEnsemble &ensemble, std::size_t mode);

/// Reduced density matrix over all internal factors (motion traced out),
/// indexed in the internal sub-basis order.
CMat reduced_internal_density(const StateVector &psi);
/// Population of the top `levels` Fock levels of `mode`.
double top_fock_population(const StateVector &psi, std::size_t mode, std::size_t levels = 2);

/// Debug dump: [[index, re, im], ...] for non-negligible amplitudes.
nlohmann::json dump_state(const StateVector &psi, double cutoff = 0.0);

}  // namespace eggsim
