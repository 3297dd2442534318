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

#include "eggsim/gates.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eggsim/derived.h"

namespace eggsim {

namespace {

/// Projector onto (|g> + sign |e>)/sqrt2 inside a `levels`-level factor.
CMat x_projector(std::size_t levels, int sign) {
    CVec v = x_vector(levels, sign);
    return v * v.adjoint();
}

std::vector<std::size_t> levels_of(const HilbertSpace &space) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < space.n_molecules(); ++i) {
        out.push_back(space.levels(i));
    }
    return out;
}

}  // namespace

Operator u_displacement(
    const HilbertSpace &space, double rabi, double eta_q, double t, std::size_t molecule, std::size_t mode,
    double guard_factor) {
    const auto sf = space.internal_factor(molecule);
    const auto mf = space.mode_factor(mode);
    const auto levels = space.factors()[sf].dim;
    const auto dim = space.factors()[mf].dim;
    const cd beta(0.0, 2.0 * rabi * eta_q * t);
    Operator u = embed(space, {{sf, x_projector(levels, -1)}, {mf, displacement_matrix(dim, beta, guard_factor)}}) +
                 embed(space, {{sf, x_projector(levels, +1)}, {mf, displacement_matrix(dim, -beta, guard_factor)}});
    if (levels == 3) {
        u = u + embed(space, sf, level_vector(3, level_a) * level_vector(3, level_a).adjoint());
    }
    return u;
}

Operator u_ms_angle(const HilbertSpace &space, double theta) {
    if (space.n_molecules() != 2) {
        throw std::invalid_argument("u_ms needs a two-molecule space");
    }
    const auto f1 = space.internal_factor(0);
    const auto f2 = space.internal_factor(1);
    const CMat x1 = pauli_matrix(space.levels(0), PauliAxis::x);
    const CMat x2 = pauli_matrix(space.levels(1), PauliAxis::x);
    // (X1 X2)^2 is the projector onto the qubit subspace of both molecules.
    const CMat p1 = x1 * x1;
    const CMat p2 = x2 * x2;
    Operator xx = embed(space, {{f1, x1}, {f2, x2}});
    Operator pp = embed(space, {{f1, p1}, {f2, p2}});
    return Operator::identity(space) + pp * cd(std::cos(theta) - 1.0) + xx * cd(0.0, -std::sin(theta));
}

Operator u_ms(
    const HilbertSpace &space, double rabi, double eta1, double eta2, double detuning, double t,
    std::vector<std::string> *warnings) {
    double ratio = ms_validity_ratio(rabi, std::max(std::abs(eta1), std::abs(eta2)), detuning);
    if (ratio < 10 && warnings) {
        warnings->push_back(
            "two-qubit propagator outside its validity range: gamma / (2 Omega eta) = " + std::to_string(ratio) +
            " < 10");
    }
    return u_ms_angle(space, ms_angle(rabi, eta1, eta2, detuning, t));
}

CMat rotation_matrix(std::size_t levels, double phi, double theta) {
    const CMat axis = std::cos(phi) * pauli_matrix(levels, PauliAxis::x) + std::sin(phi) * pauli_matrix(levels, PauliAxis::y);
    // axis^2 is the (g, e) projector, so the exponential has a closed form.
    const CMat proj = axis * axis;
    return CMat::Identity(levels, levels) + (std::cos(theta / 2) - 1.0) * proj - cd(0, std::sin(theta / 2)) * axis;
}

Operator single_qubit_rotation(const HilbertSpace &space, std::size_t molecule, double phi, double theta) {
    return embed(space, space.internal_factor(molecule), rotation_matrix(space.levels(molecule), phi, theta));
}

CVec ms_target(const std::vector<std::size_t> &levels, double theta) {
    if (levels.size() != 2) {
        throw std::invalid_argument("ms_target needs two molecules");
    }
    CVec t = CVec::Zero(levels[0] * levels[1]);
    t[level_g * levels[1] + level_g] = std::cos(theta);
    t[level_e * levels[1] + level_e] = cd(0, -std::sin(theta));
    return t;
}

double bell_fidelity(const CMat &rho, const std::vector<std::size_t> &levels, double theta) {
    CVec t = ms_target(levels, theta);
    if (rho.rows() != t.size() || rho.cols() != t.size()) {
        throw std::invalid_argument("bell_fidelity: density matrix does not match the internal space");
    }
    return t.dot(rho * t).real();
}

double bell_fidelity(const StateVector &psi, double theta) {
    return bell_fidelity(reduced_internal_density(psi), levels_of(psi.space()), theta);
}

double bell_fidelity(const MixedEnsemble &ensemble, double theta) {
    const auto &members = ensemble.members();
    CMat rho = CMat::Zero(members.front().state.space().internal_dimension(), members.front().state.space().internal_dimension());
    for (const auto &m : members) {
        rho += m.weight * reduced_internal_density(m.state);
    }
    return bell_fidelity(rho, levels_of(members.front().state.space()), theta);
}

double bell_fidelity(const StateVector &psi, double rabi, double eta1, double eta2, double detuning, double t) {
    return bell_fidelity(psi, ms_angle(rabi, eta1, eta2, detuning, t));
}

}  // namespace eggsim
