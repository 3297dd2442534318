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

#include "eggsim/hamiltonian.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "eggsim/derived.h"
#include "eggsim/errors.h"

namespace eggsim {

Envelope Envelope::constant(cd c) {
    Envelope e;
    e.phasors_.push_back({c, 0.0});
    return e;
}

Envelope Envelope::cosine(double c, double w, double phi) {
    Envelope e;
    if (w == 0) {
        e.phasors_.push_back({c * std::cos(phi), 0.0});
        return e;
    }
    e.phasors_.push_back({0.5 * c * std::polar(1.0, phi), w});
    e.phasors_.push_back({0.5 * c * std::polar(1.0, -phi), -w});
    return e;
}

Envelope Envelope::exponential(cd c, double w) {
    Envelope e;
    e.phasors_.push_back({c, w});
    return e;
}

cd Envelope::operator()(double t) const {
    cd total = 0;
    for (const auto &p : phasors_) {
        total += p.amplitude * std::polar(1.0, p.frequency * t);
    }
    return total;
}

double Envelope::max_magnitude() const {
    double total = 0;
    for (const auto &p : phasors_) {
        total += std::abs(p.amplitude);
    }
    return total;
}

Envelope Envelope::conj() const {
    Envelope e;
    for (const auto &p : phasors_) {
        e.phasors_.push_back({std::conj(p.amplitude), -p.frequency});
    }
    return e;
}

Envelope &Envelope::operator+=(const Envelope &other) {
    for (const auto &p : other.phasors_) {
        auto it = std::find_if(phasors_.begin(), phasors_.end(), [&](const Phasor &q) {
            return q.frequency == p.frequency;
        });
        if (it == phasors_.end()) {
            phasors_.push_back(p);
        } else {
            it->amplitude += p.amplitude;
        }
    }
    return *this;
}

Hamiltonian::Hamiltonian(HilbertSpace space, Frame frame) : space_(std::move(space)), frame_(frame) {
}

void Hamiltonian::add(const std::string &label, const Operator &op, const Envelope &f, std::optional<CMat> internal) {
    if (!(op.space() == space_)) {
        throw std::invalid_argument("Hamiltonian term '" + label + "' lives on a different space");
    }
    for (auto &term : terms_) {
        if (term.label == label) {
            term.envelope += f;
            return;
        }
    }
    terms_.push_back({label, op, f, std::move(internal)});
}

void Hamiltonian::add_hermitian_pair(
    const std::string &label, const Operator &op, const Envelope &f, std::optional<CMat> internal) {
    std::optional<CMat> internal_dag;
    if (internal) {
        internal_dag = internal->adjoint();
    }
    add(label, op, f, std::move(internal));
    add(label + "^dag", op.adjoint(), f.conj(), std::move(internal_dag));
}

void Hamiltonian::append(const Hamiltonian &other) {
    if (!(other.space_ == space_)) {
        throw std::invalid_argument("cannot append Hamiltonians on different spaces");
    }
    for (const auto &term : other.terms_) {
        add(term.label, term.op, term.envelope, term.internal);
    }
}

SpMat Hamiltonian::matrix(double t) const {
    SpMat h(space_.dimension(), space_.dimension());
    for (const auto &term : terms_) {
        h += term.op.matrix() * term.envelope(t);
    }
    return h;
}

double Hamiltonian::hermiticity_defect(double t) const {
    SpMat h = matrix(t);
    SpMat d = h - SpMat(h.adjoint());
    double hmax = 0;
    double dmax = 0;
    for (Eigen::Index r = 0; r < h.outerSize(); ++r) {
        for (SpMat::InnerIterator it(h, r); it; ++it) {
            hmax = std::max(hmax, std::abs(it.value()));
        }
        for (SpMat::InnerIterator it(d, r); it; ++it) {
            dmax = std::max(dmax, std::abs(it.value()));
        }
    }
    return hmax == 0 ? 0.0 : dmax / hmax;
}

Hamiltonian Hamiltonian::secular_part(double tolerance) const {
    Hamiltonian out(space_, frame_);
    for (const auto &term : terms_) {
        Envelope kept;
        for (const auto &p : term.envelope.phasors()) {
            if (std::abs(p.frequency) <= tolerance) {
                kept += Envelope::constant(p.amplitude);
            }
        }
        if (!kept.phasors().empty()) {
            out.add(term.label, term.op, kept, term.internal);
        }
    }
    return out;
}

double Hamiltonian::fastest_frequency() const {
    double w = 0;
    for (const auto &term : terms_) {
        for (const auto &p : term.envelope.phasors()) {
            w = std::max(w, std::abs(p.frequency));
        }
    }
    return w;
}

namespace {

/// sqrt(||O||_1 ||O||_inf), an upper bound on the spectral norm.
double operator_norm_bound(const SpMat &m) {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
    Eigen::VectorXd cols = Eigen::VectorXd::Zero(m.cols());
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        for (SpMat::InnerIterator it(m, r); it; ++it) {
            rows[it.row()] += std::abs(it.value());
            cols[it.col()] += std::abs(it.value());
        }
    }
    if (m.rows() == 0) {
        return 0.0;
    }
    return std::sqrt(rows.maxCoeff() * cols.maxCoeff());
}

}  // namespace

double Hamiltonian::norm_bound() const {
    double total = 0;
    for (const auto &term : terms_) {
        total += term.envelope.max_magnitude() * operator_norm_bound(term.op.matrix());
    }
    return total;
}

// ---------------------------------------------------------------------------
// Builders

namespace {

std::vector<std::size_t> molecule_list(const HilbertSpace &space, std::optional<std::size_t> molecule) {
    std::vector<std::size_t> out;
    if (molecule) {
        space.internal_factor(*molecule);  // range check
        out.push_back(*molecule);
    } else {
        for (std::size_t i = 0; i < space.n_molecules(); ++i) {
            out.push_back(i);
        }
    }
    return out;
}

CMat local_pauli(const HilbertSpace &space, std::size_t molecule, PauliAxis axis) {
    return pauli_matrix(space.levels(molecule), axis);
}

}  // namespace

CMat internal_embed(const HilbertSpace &space, std::size_t molecule, const CMat &local) {
    space.internal_factor(molecule);  // range check
    CMat out = CMat::Identity(1, 1);
    for (std::size_t i = 0; i < space.n_molecules(); ++i) {
        const auto d = space.levels(i);
        const CMat f = i == molecule ? local : CMat::Identity(d, d);
        CMat next(out.rows() * d, out.cols() * d);
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            for (Eigen::Index c = 0; c < out.cols(); ++c) {
                next.block(r * d, c * d, d, d) = out(r, c) * f;
            }
        }
        out = std::move(next);
    }
    return out;
}

Hamiltonian build_E1(
    const HilbertSpace &space, double rabi, double detuning, double phase, std::optional<std::size_t> molecule) {
    Hamiltonian h(space, Frame::spin);
    for (auto i : molecule_list(space, molecule)) {
        auto sp = pauli(space, i, PauliAxis::raising);
        h.add_hermitian_pair(
            "s+[" + std::to_string(i) + "]", sp, Envelope::exponential(0.5 * rabi * std::polar(1.0, -phase), detuning),
            internal_embed(space, i, local_pauli(space, i, PauliAxis::raising)));
    }
    return h;
}

Hamiltonian build_E2(
    const HilbertSpace &space,
    const std::vector<DriveTone> &tones,
    const std::vector<ModeSpec> &modes,
    const MoleculeConfig &mol,
    const TrapConfig &trap,
    Frame frame) {
    if (modes.size() != space.n_modes()) {
        throw ConfigError(
            "build_E2: " + std::to_string(modes.size()) + " mode specs for a space with " +
            std::to_string(space.n_modes()) + " modes");
    }
    for (const auto &m : modes) {
        if (m.participation.size() < space.n_molecules()) {
            throw ConfigError("build_E2: mode participation vector shorter than the molecule count");
        }
    }
    Hamiltonian h(space, frame);
    const double carrier_ratio = trap.x_eq / trap.field_radius;
    for (const auto &tone : tones) {
        if (tone.geometry != Geometry::quadrupole) {
            throw ConfigError("build_E2 only accepts quadrupole-geometry tones");
        }
        tone.validate();
        const double rabi = rabi_frequency(mol.dipole_moment, tone.amplitude, trap.field_radius);
        const double delta = mol.splitting - tone.frequency;
        const cd spin_phase = std::polar(1.0, -tone.phase);
        for (std::size_t i = 0; i < space.n_molecules(); ++i) {
            const auto si = std::to_string(i);
            const auto sf = space.internal_factor(i);
            const CMat sp = local_pauli(space, i, PauliAxis::raising);
            if (carrier_ratio != 0) {
                h.add_hermitian_pair(
                    "s+[" + si + "]", embed(space, sf, sp),
                    Envelope::exponential(2.0 * rabi * carrier_ratio * spin_phase, delta), internal_embed(space, i, sp));
            }
            for (std::size_t p = 0; p < modes.size(); ++p) {
                const double g = 2.0 * rabi * eta(modes[p].participation[i], mol.mass, modes[p].frequency, trap.field_radius);
                if (g == 0) {
                    continue;
                }
                const auto mf = space.mode_factor(p);
                const CMat a = lowering_matrix(space.factors()[mf].dim);
                const CMat ad = a.adjoint();
                const double w = frame == Frame::full ? modes[p].frequency : 0.0;
                const auto sp_tag = "[" + si + "," + std::to_string(p) + "]";
                // a s+ and a^dag s+, each with its Hermitian partner.
                h.add_hermitian_pair(
                    "a s+" + sp_tag, embed(space, {{sf, sp}, {mf, a}}), Envelope::exponential(g * spin_phase, delta - w));
                h.add_hermitian_pair(
                    "ad s+" + sp_tag, embed(space, {{sf, sp}, {mf, ad}}), Envelope::exponential(g * spin_phase, delta + w));
            }
        }
    }
    if (frame == Frame::spin) {
        for (std::size_t p = 0; p < modes.size(); ++p) {
            h.add("n[" + std::to_string(p) + "]", number_operator(space, p), Envelope::constant(modes[p].frequency));
        }
    }
    return h;
}

Hamiltonian build_carrier_error(
    const HilbertSpace &space, double rabi, double x_eq, double field_radius, double mode_frequency,
    double detuning) {
    if (space.n_molecules() != 2) {
        throw std::invalid_argument("build_carrier_error needs a two-molecule space");
    }
    Hamiltonian h(space, Frame::full);
    const double amp = 4.0 * rabi * x_eq / field_radius;
    Operator x_sum = pauli(space, 0, PauliAxis::x) + pauli(space, 1, PauliAxis::x);
    if (amp != 0) {
        CMat x_int = internal_embed(space, 0, local_pauli(space, 0, PauliAxis::x)) +
                     internal_embed(space, 1, local_pauli(space, 1, PauliAxis::x));
        h.add("X1+X2", x_sum, Envelope::cosine(amp, mode_frequency + detuning), x_int);
    }
    return h;
}

Hamiltonian build_bichromatic_effective(
    const HilbertSpace &space, double rabi, const std::vector<double> &etas, std::size_t mode) {
    if (etas.size() != space.n_molecules()) {
        throw std::invalid_argument("build_bichromatic_effective needs one eta per molecule");
    }
    Hamiltonian h(space, Frame::full);
    const auto mf = space.mode_factor(mode);
    const CMat a = lowering_matrix(space.factors()[mf].dim);
    const CMat quad = a + a.adjoint();
    for (std::size_t i = 0; i < etas.size(); ++i) {
        const auto sf = space.internal_factor(i);
        h.add(
            "x X[" + std::to_string(i) + "]", embed(space, {{sf, local_pauli(space, i, PauliAxis::x)}, {mf, quad}}),
            Envelope::constant(2.0 * rabi * etas[i]));
    }
    return h;
}

}  // namespace eggsim
