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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <thread>

#include "eggsim/errors.h"

namespace eggsim {

StepPolicy StepPolicy::from(const NumericsConfig &numerics) {
    StepPolicy p;
    p.steps_per_period = numerics.steps_per_period;
    p.max_phase_per_step = numerics.max_phase_per_step;
    p.internal_frame = numerics.internal_frame;
    return p;
}

StepPolicy StepPolicy::halved() const {
    StepPolicy p = *this;
    p.steps_per_period *= 2;
    p.max_phase_per_step /= 2;
    p.max_dt /= 2;
    return p;
}

double StepPolicy::step_bound(const Hamiltonian &h) const {
    double dt = INFINITY;
    double w = h.fastest_frequency();
    if (w > 0) {
        dt = std::min(dt, 2 * std::numbers::pi / w / steps_per_period);
    }
    double norm = h.norm_bound();
    if (norm > 0) {
        dt = std::min(dt, max_phase_per_step / norm);
    }
    if (max_dt > 0) {
        dt = std::min(dt, max_dt);
    }
    return dt;
}

EvolveOptions EvolveOptions::uniform(double t_end, int samples, double t_start) {
    if (samples < 1) {
        throw std::invalid_argument("need at least one sample");
    }
    EvolveOptions o;
    o.t_start = t_start;
    if (samples == 1) {
        o.sample_times = {t_end};
        return o;
    }
    for (int k = 0; k < samples; ++k) {
        o.sample_times.push_back(t_start + (t_end - t_start) * k / (samples - 1));
    }
    return o;
}

namespace {

/// Norm bound sqrt(||O||_1 ||O||_inf) of a dense matrix.
double dense_norm_bound(const CMat &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    return std::sqrt(m.cwiseAbs().rowwise().sum().maxCoeff() * m.cwiseAbs().colwise().sum().maxCoeff());
}

/// Every term of H that is not absorbed into the internal frame, flattened
/// into one row-major entry list tagged with its term slot, plus the
/// distinct phasor frequencies.
class CompiledHamiltonian {
   public:
    CompiledHamiltonian(const Hamiltonian &h, bool skip_internal) : dim_(h.space().dimension()) {
        const auto &terms = h.terms();
        std::vector<std::vector<Entry>> rows(dim_);
        for (const auto &term : terms) {
            if (skip_internal && term.internal) {
                continue;
            }
            const auto slot = static_cast<std::uint32_t>(slot_phasors_.size());
            slot_phasors_.emplace_back();
            for (const auto &p : term.envelope.phasors()) {
                slot_phasors_.back().push_back({p.amplitude, frequency_index(p.frequency)});
                fastest_ = std::max(fastest_, std::abs(p.frequency));
            }
            const SpMat &m = term.op.matrix();
            Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(m.rows());
            Eigen::VectorXd col_sum = Eigen::VectorXd::Zero(m.cols());
            for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
                for (SpMat::InnerIterator it(m, r); it; ++it) {
                    if (it.value() != cd(0)) {
                        rows[it.row()].push_back({static_cast<std::uint32_t>(it.col()), slot, it.value()});
                        row_sum[it.row()] += std::abs(it.value());
                        col_sum[it.col()] += std::abs(it.value());
                    }
                }
            }
            if (m.rows() > 0) {
                norm_ += term.envelope.max_magnitude() * std::sqrt(row_sum.maxCoeff() * col_sum.maxCoeff());
            }
        }
        row_start_.push_back(0);
        for (auto &r : rows) {
            entries_.insert(entries_.end(), r.begin(), r.end());
            row_start_.push_back(entries_.size());
        }
        phasor_values_.resize(freqs_.size());
        coeffs_.resize(slot_phasors_.size());
    }

    double norm_bound() const { return norm_; }
    double fastest_frequency() const { return fastest_; }

    /// Fills the per-term coefficients at time t.
    void set_time(double t) {
        for (std::size_t f = 0; f < freqs_.size(); ++f) {
            phasor_values_[f] = std::polar(1.0, freqs_[f] * t);
        }
        for (std::size_t s = 0; s < coeffs_.size(); ++s) {
            cd c = 0;
            for (const auto &[amp, fi] : slot_phasors_[s]) {
                c += amp * phasor_values_[fi];
            }
            coeffs_[s] = c;
        }
    }

    /// out = -i H x at the last set time.
    void apply(const cd *xp, cd *op) const {
        for (std::size_t r = 0; r < dim_; ++r) {
            double re = 0;
            double im = 0;
            for (std::size_t e = row_start_[r]; e < row_start_[r + 1]; ++e) {
                const Entry &en = entries_[e];
                const cd v = coeffs_[en.slot] * en.value;
                const cd xv = xp[en.col];
                re += v.real() * xv.real() - v.imag() * xv.imag();
                im += v.real() * xv.imag() + v.imag() * xv.real();
            }
            op[r] = cd(im, -re);
        }
    }

   private:
    struct Entry {
        std::uint32_t col;
        std::uint32_t slot;
        cd value;
    };

    std::size_t frequency_index(double w) {
        auto it = std::find(freqs_.begin(), freqs_.end(), w);
        if (it != freqs_.end()) {
            return static_cast<std::size_t>(it - freqs_.begin());
        }
        freqs_.push_back(w);
        return freqs_.size() - 1;
    }

    std::size_t dim_;
    double norm_ = 0.0;
    double fastest_ = 0.0;
    std::vector<double> freqs_;
    std::vector<std::vector<std::pair<cd, std::size_t>>> slot_phasors_;
    std::vector<std::size_t> row_start_;
    std::vector<Entry> entries_;
    std::vector<cd> phasor_values_;
    std::vector<cd> coeffs_;
};

/// Closed-form propagator of (part of) the internal-only terms A(t).
///
/// A(t) is split into Hermitian pieces H_j g_j(t) with g_j one of 1,
/// cos(nu t), sin(nu t). The largest piece and every other piece that
/// commutes with all chosen ones form the frame; their propagator is
/// V exp(-i sum_j G_j(t) d_j) V^dag with G_j the integral of g_j and V a
/// common eigenbasis. Pieces left over are handed back as ordinary terms.
class InternalFrame {
   public:
    explicit InternalFrame(const Hamiltonian &h) {
        std::vector<std::pair<double, CMat>> groups;
        for (const auto &term : h.terms()) {
            if (!term.internal) {
                continue;
            }
            dim_ = term.internal->rows();
            for (const auto &p : term.envelope.phasors()) {
                auto it = std::find_if(groups.begin(), groups.end(), [&](const auto &g) {
                    return std::abs(g.first - p.frequency) <= 1e-9 * std::max(std::abs(g.first), std::abs(p.frequency));
                });
                if (it == groups.end()) {
                    groups.emplace_back(p.frequency, CMat::Zero(dim_, dim_));
                    it = groups.end() - 1;
                }
                it->second += p.amplitude * *term.internal;
            }
        }
        if (groups.empty()) {
            return;
        }
        std::vector<Component> pieces;
        std::vector<bool> used(groups.size(), false);
        for (std::size_t a = 0; a < groups.size(); ++a) {
            if (used[a]) {
                continue;
            }
            used[a] = true;
            const double nu = groups[a].first;
            const CMat &c = groups[a].second;
            if (nu == 0) {
                pieces.push_back({0.5 * (c + c.adjoint()), Shape::constant, 0.0, 0.0, {}});
                continue;
            }
            CMat partner = CMat::Zero(dim_, dim_);
            for (std::size_t b = a + 1; b < groups.size(); ++b) {
                if (!used[b] && std::abs(groups[b].first + nu) <= 1e-9 * std::abs(nu)) {
                    partner = groups[b].second;
                    used[b] = true;
                    break;
                }
            }
            // e^{i nu t} C + e^{-i nu t} C' = cos(nu t)(C + C') + sin(nu t) i(C - C').
            const double w = std::abs(nu);
            const CMat &pos = nu > 0 ? c : partner;
            const CMat &neg = nu > 0 ? partner : c;
            CMat hc = pos + neg;
            CMat hs = cd(0, 1) * (pos - neg);
            pieces.push_back({0.5 * (hc + hc.adjoint()), Shape::cosine, w, 0.0, {}});
            pieces.push_back({0.5 * (hs + hs.adjoint()), Shape::sine, w, 0.0, {}});
        }
        for (auto &p : pieces) {
            p.norm = dense_norm_bound(p.h);
        }
        pieces.erase(std::remove_if(pieces.begin(), pieces.end(), [](const Component &p) { return p.norm == 0; }), pieces.end());
        std::stable_sort(pieces.begin(), pieces.end(), [](const Component &a, const Component &b) { return a.norm > b.norm; });
        if (pieces.empty()) {
            return;
        }
        for (auto &p : pieces) {
            bool commutes = true;
            for (const auto &q : chosen_) {
                const CMat comm = p.h * q.h - q.h * p.h;
                if (comm.cwiseAbs().maxCoeff() > 1e-12 * p.norm * q.norm) {
                    commutes = false;
                    break;
                }
            }
            (commutes ? chosen_ : leftover_).push_back(p);
        }
        if (!diagonalize()) {
            // A generic combination failed to separate the pieces; keep the
            // dominant one only.
            leftover_.insert(leftover_.end(), chosen_.begin() + 1, chosen_.end());
            chosen_.resize(1);
            diagonalize();
        }
        for (const auto &p : chosen_) {
            norm_ += p.d.cwiseAbs().maxCoeff();
            spread_ += p.d.maxCoeff() - p.d.minCoeff();
            fastest_ = std::max(fastest_, p.nu);
        }
        phases_.resize(dim_);
        u_.resize(dim_, dim_);
    }

    bool empty() const { return chosen_.empty(); }
    double norm_bound() const { return norm_; }
    /// Fastest oscillation the frame imprints on the other terms.
    double fastest_frequency() const { return std::max(fastest_, spread_); }
    Eigen::Index dim() const { return dim_; }

    /// Pieces not absorbed by the frame, as full-space terms.
    void add_leftovers(Hamiltonian &rest) const {
        const auto &space = rest.space();
        const auto d = static_cast<Eigen::Index>(space.dimension());
        const Eigen::Index block = d / dim_;
        for (std::size_t k = 0; k < leftover_.size(); ++k) {
            const auto &p = leftover_[k];
            std::vector<Eigen::Triplet<cd>> trips;
            for (Eigen::Index i = 0; i < dim_; ++i) {
                for (Eigen::Index j = 0; j < dim_; ++j) {
                    if (p.h(i, j) != cd(0)) {
                        for (Eigen::Index r = 0; r < block; ++r) {
                            trips.emplace_back(i * block + r, j * block + r, p.h(i, j));
                        }
                    }
                }
            }
            SpMat m(d, d);
            m.setFromTriplets(trips.begin(), trips.end());
            Envelope env = p.shape == Shape::constant ? Envelope::constant(1.0)
                           : p.shape == Shape::cosine ? Envelope::cosine(1.0, p.nu)
                                                      : Envelope::cosine(1.0, p.nu, -std::numbers::pi / 2);
            rest.add("internal-rest[" + std::to_string(k) + "]", Operator(space, m), env);
        }
    }

    void reset(double t0) { t0_ = t0; }

    /// U_A(t) with U_A(t0) = 1.
    const CMat &at(double t) {
        phases_.setZero();
        for (const auto &p : chosen_) {
            double g = 0.0;
            switch (p.shape) {
                case Shape::constant:
                    g = t - t0_;
                    break;
                case Shape::cosine:
                    g = (std::sin(p.nu * t) - std::sin(p.nu * t0_)) / p.nu;
                    break;
                case Shape::sine:
                    g = (std::cos(p.nu * t0_) - std::cos(p.nu * t)) / p.nu;
                    break;
            }
            phases_ += g * p.d;
        }
        Eigen::VectorXcd diag(dim_);
        for (Eigen::Index i = 0; i < dim_; ++i) {
            diag[i] = std::polar(1.0, -phases_[i]);
        }
        u_.noalias() = basis_ * diag.asDiagonal() * basis_.adjoint();
        return u_;
    }

   private:
    enum class Shape { constant, cosine, sine };
    struct Component {
        CMat h;
        Shape shape;
        double nu;
        double norm = 0.0;
        Eigen::VectorXd d;
    };

    bool diagonalize() {
        CMat mix = CMat::Zero(dim_, dim_);
        for (std::size_t j = 0; j < chosen_.size(); ++j) {
            const double jj = static_cast<double>(j);
            mix += (1.0 + 0.3819660112501051 * jj + 0.0731 * jj * jj) / chosen_[j].norm * chosen_[j].h;
        }
        Eigen::SelfAdjointEigenSolver<CMat> es(mix);
        basis_ = es.eigenvectors();
        for (auto &p : chosen_) {
            CMat rotated = basis_.adjoint() * p.h * basis_;
            p.d = rotated.diagonal().real();
            rotated.diagonal().setZero();
            if (rotated.cwiseAbs().maxCoeff() > 1e-10 * p.norm) {
                return false;
            }
        }
        return true;
    }

    std::vector<Component> chosen_;
    std::vector<Component> leftover_;
    CMat basis_;
    Eigen::VectorXd phases_;
    CMat u_;
    double norm_ = 0.0;
    double spread_ = 0.0;
    double fastest_ = 0.0;
    Eigen::Index dim_ = 0;
    double t0_ = 0.0;
};

bool internal_factors_lead(const HilbertSpace &space) {
    for (std::size_t i = 0; i < space.n_molecules(); ++i) {
        if (space.internal_factor(i) != i) {
            return false;
        }
    }
    return true;
}

using RowMajorCMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Hamiltonian minus the internal-only terms, plus whatever the frame could
/// not absorb.
Hamiltonian without_frame(const Hamiltonian &h, const InternalFrame &frame) {
    Hamiltonian rest(h.space(), h.frame());
    for (const auto &term : h.terms()) {
        if (!term.internal) {
            rest.add(term.label, term.op, term.envelope);
        }
    }
    frame.add_leftovers(rest);
    return rest;
}

/// Fixed-step RK4, optionally inside the internal frame.
class Integrator {
   public:
    Integrator(const Hamiltonian &h, const StepPolicy &policy) : frame_(h) {
        const auto d = static_cast<Eigen::Index>(h.space().dimension());
        if (!frame_.empty() && policy.internal_frame && internal_factors_lead(h.space())) {
            auto rest = without_frame(h, frame_);
            auto compiled = std::make_unique<CompiledHamiltonian>(rest, false);
            if (frame_.norm_bound() > policy.frame_ratio * compiled->norm_bound()) {
                use_frame_ = true;
                ch_ = std::move(compiled);
            }
        }
        if (!use_frame_) {
            ch_ = std::make_unique<CompiledHamiltonian>(h, false);
        }
        if (use_frame_) {
            block_cols_ = d / frame_.dim();
            frame_tmp_.resize(d);
            block_tmp_.resize(frame_.dim(), block_cols_);
        }
        double w = ch_->fastest_frequency();
        const double norm = ch_->norm_bound();
        if (use_frame_) {
            w = std::max(w, frame_.fastest_frequency());
        }
        bound_ = INFINITY;
        if (w > 0) {
            bound_ = std::min(bound_, 2 * std::numbers::pi / w / policy.steps_per_period);
        }
        if (norm > 0) {
            bound_ = std::min(bound_, policy.max_phase_per_step / norm);
        }
        if (policy.max_dt > 0) {
            bound_ = std::min(bound_, policy.max_dt);
        }
        for (auto *v : {&k1_, &k2_, &k3_, &k4_, &tmp_}) {
            v->resize(d);
        }
    }

    double step_bound() const { return bound_; }
    bool uses_frame() const { return use_frame_; }

    void start(double t0) {
        t_now_ = t0;
        if (use_frame_) {
            frame_.reset(t0);
        }
    }

    /// Advances the (frame) state from t0 to t1 in n equal steps.
    void run(CVec &psi, double t0, double t1, std::size_t n) {
        const double h = (t1 - t0) / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = t0 + h * static_cast<double>(k);
            if (use_frame_) {
                u0_ = k == 0 ? frame_.at(t) : u1_;
                u_mid_ = frame_.at(t + 0.5 * h);
                u1_ = frame_.at(t + h);
            }
            ch_->set_time(t);
            rhs(psi, k1_, u0_);
            ch_->set_time(t + 0.5 * h);
            tmp_ = psi + (0.5 * h) * k1_;
            rhs(tmp_, k2_, u_mid_);
            tmp_ = psi + (0.5 * h) * k2_;
            rhs(tmp_, k3_, u_mid_);
            ch_->set_time(t + h);
            tmp_ = psi + h * k3_;
            rhs(tmp_, k4_, u1_);
            psi += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
        }
        t_now_ = t1;
    }

    /// Lab-frame state for a frame state at the current time.
    CVec to_lab(const CVec &psi) {
        if (!use_frame_) {
            return psi;
        }
        CVec out(psi.size());
        block_apply(frame_.at(t_now_), psi, out);
        return out;
    }

   private:
    void block_apply(const CMat &u, const CVec &x, CVec &out) const {
        Eigen::Map<const RowMajorCMat> xm(x.data(), u.rows(), block_cols_);
        Eigen::Map<RowMajorCMat> om(out.data(), u.rows(), block_cols_);
        om.noalias() = u * xm;
    }

    void rhs(const CVec &x, CVec &out, const CMat &u) {
        if (!use_frame_) {
            ch_->apply(x.data(), out.data());
            return;
        }
        // -i U^dag B U x
        block_apply(u, x, frame_tmp_);
        ch_->apply(frame_tmp_.data(), out.data());
        Eigen::Map<RowMajorCMat> om(out.data(), u.rows(), block_cols_);
        block_tmp_.noalias() = u.adjoint() * om;
        om = block_tmp_;
    }

    InternalFrame frame_;
    bool use_frame_ = false;
    std::unique_ptr<CompiledHamiltonian> ch_;
    Eigen::Index block_cols_ = 0;
    double bound_ = INFINITY;
    double t_now_ = 0.0;
    CMat u0_, u_mid_, u1_;
    RowMajorCMat block_tmp_;
    CVec k1_, k2_, k3_, k4_, tmp_, frame_tmp_;
};

std::size_t steps_for(double interval, double dt_bound) {
    if (interval <= 0) {
        return 0;
    }
    if (!std::isfinite(dt_bound)) {
        return 1;
    }
    return static_cast<std::size_t>(std::max(1.0, std::ceil(interval / dt_bound * (1 - 1e-12))));
}

void check_samples(const EvolveOptions &o) {
    if (o.sample_times.empty()) {
        throw std::invalid_argument("evolve needs at least one sample time");
    }
    double prev = o.t_start;
    for (double t : o.sample_times) {
        if (!(t >= prev)) {
            throw std::invalid_argument("sample times must be ascending and not before t_start");
        }
        prev = t;
    }
}

struct MemberRun {
    std::vector<std::vector<double>> mean_n;
    std::vector<CMat> rho;
    std::vector<double> drift;
    double top = 0;
    double dt = 0;
    std::size_t steps = 0;
    std::optional<StateVector> final_state;
};

MemberRun run_member(const Hamiltonian &h, const StateVector &psi0, const EvolveOptions &o, const StepPolicy &policy) {
    if (!(h.space() == psi0.space())) {
        throw std::invalid_argument("evolve: Hamiltonian and state live on different spaces");
    }
    const auto &space = psi0.space();
    MemberRun out;
    Integrator rk(h, policy);
    rk.start(o.t_start);
    CVec psi = psi0.amplitudes();
    const double norm0 = psi.norm();
    const double bound = rk.step_bound();
    double t = o.t_start;
    for (double ts : o.sample_times) {
        auto n = steps_for(ts - t, bound);
        if (n > 0) {
            rk.run(psi, t, ts, n);
            out.dt = std::max(out.dt, (ts - t) / static_cast<double>(n));
            out.steps += n;
        }
        t = ts;
        auto state = StateVector::unchecked(space, rk.to_lab(psi));
        double drift = std::abs(state.amplitudes().norm() - norm0);
        if (o.throw_on_norm_drift && drift > o.norm_tolerance) {
            throw NormDriftError(
                "norm drift " + std::to_string(drift) + " exceeds " + std::to_string(o.norm_tolerance) + " at t = " +
                std::to_string(ts) + " s; reduce the step (steps_per_period / max_phase_per_step)");
        }
        out.drift.push_back(drift);
        std::vector<double> n_modes;
        for (std::size_t p = 0; p < space.n_modes(); ++p) {
            n_modes.push_back(mean_phonons(state, p));
            double top = top_fock_population(state, p, 2);
            out.top = std::max(out.top, top);
            if (o.check_truncation && top > o.truncation_tolerance) {
                throw TruncationError(
                    "population " + std::to_string(top) + " in the top two Fock levels of mode " + std::to_string(p) +
                    " (n_max = " + std::to_string(space.fock_dim(p) - 1) + ") at t = " + std::to_string(ts) +
                    " s; increase n_max");
            }
        }
        out.mean_n.push_back(std::move(n_modes));
        out.rho.push_back(reduced_internal_density(state));
    }
    out.final_state = StateVector::unchecked(space, rk.to_lab(psi));
    return out;
}

EvolutionResult reduce(const std::vector<MemberRun> &runs, const std::vector<double> &weights, const EvolveOptions &o, const HilbertSpace &space0) {
    EvolutionResult r;
    r.times = o.sample_times;
    for (std::size_t i = 0; i < space0.n_molecules(); ++i) {
        r.internal_levels.push_back(space0.levels(i));
    }
    const std::size_t ns = o.sample_times.size();
    r.mean_n.assign(ns, std::vector<double>(space0.n_modes(), 0.0));
    r.internal_density.assign(ns, CMat::Zero(space0.internal_dimension(), space0.internal_dimension()));
    r.norm_drift.assign(ns, 0.0);
    for (std::size_t m = 0; m < runs.size(); ++m) {
        const auto &run = runs[m];
        const double w = weights[m];
        for (std::size_t s = 0; s < ns; ++s) {
            for (std::size_t p = 0; p < r.mean_n[s].size(); ++p) {
                r.mean_n[s][p] += w * run.mean_n[s][p];
            }
            r.internal_density[s] += w * run.rho[s];
            r.norm_drift[s] = std::max(r.norm_drift[s], run.drift[s]);
        }
        r.dt = std::max(r.dt, run.dt);
        r.steps = std::max(r.steps, run.steps);
        r.max_top_population = std::max(r.max_top_population, run.top);
        r.final_states.push_back(*run.final_state);
        r.weights.push_back(w);
    }
    for (double d : r.norm_drift) {
        r.max_norm_drift = std::max(r.max_norm_drift, d);
    }
    r.norm_flagged = r.max_norm_drift > o.norm_tolerance;
    return r;
}

EvolutionResult run_all(
    const std::vector<const Hamiltonian *> &hams, const MixedEnsemble &ensemble, const EvolveOptions &o,
    const StepPolicy &policy) {
    const auto &members = ensemble.members();
    std::vector<MemberRun> runs(members.size());
    std::vector<std::exception_ptr> errors(members.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t m = next.fetch_add(1);
            if (m >= members.size()) {
                return;
            }
            try {
                runs[m] = run_member(*hams[m], members[m].state, o, policy);
            } catch (...) {
                errors[m] = std::current_exception();
            }
        }
    };
    std::size_t n_threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, o.threads)), 1, members.size());
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < n_threads; ++k) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::vector<double> weights;
    for (const auto &m : members) {
        weights.push_back(m.weight);
    }
    return reduce(runs, weights, o, members.front().state.space());
}

double observable_delta(const EvolutionResult &a, const EvolutionResult &b) {
    double delta = 0;
    for (std::size_t s = 0; s < a.samples(); ++s) {
        for (std::size_t p = 0; p < a.mean_n[s].size(); ++p) {
            delta = std::max(delta, std::abs(a.mean_n[s][p] - b.mean_n[s][p]) / (1.0 + std::abs(a.mean_n[s][p])));
        }
        delta = std::max(delta, (a.internal_density[s] - b.internal_density[s]).cwiseAbs().maxCoeff());
    }
    return delta;
}

EvolutionResult run_with_check(const std::vector<const Hamiltonian *> &hams, const MixedEnsemble &ensemble, const EvolveOptions &o) {
    check_samples(o);
    auto policy = o.step;
    auto result = run_all(hams, ensemble, o, policy);
    if (o.convergence_check) {
        auto fine = run_all(hams, ensemble, o, policy.halved());
        result.convergence_delta = observable_delta(result, fine);
    }
    return result;
}

}  // namespace

double EvolutionResult::population(std::size_t sample, const std::vector<std::size_t> &levels) const {
    if (levels.size() != internal_levels.size()) {
        throw std::invalid_argument("population needs one level per molecule");
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] >= internal_levels[i]) {
            throw std::out_of_range("level index out of range");
        }
        idx = idx * internal_levels[i] + levels[i];
    }
    return internal_density.at(sample)(idx, idx).real();
}

double EvolutionResult::sigma_x(std::size_t sample, std::size_t molecule) const {
    if (molecule >= internal_levels.size()) {
        throw std::out_of_range("molecule index out of range");
    }
    std::vector<Factor> factors;
    for (auto l : internal_levels) {
        factors.push_back({FactorKind::internal, l});
    }
    HilbertSpace internal(factors);
    CMat x = embed(internal, molecule, pauli_matrix(internal_levels[molecule], PauliAxis::x)).dense();
    return (internal_density.at(sample) * x).trace().real();
}

std::vector<double> EvolutionResult::mean_n_trace(std::size_t mode) const {
    std::vector<double> out;
    for (const auto &row : mean_n) {
        out.push_back(row.at(mode));
    }
    return out;
}

std::vector<double> EvolutionResult::population_trace(const std::vector<std::size_t> &levels) const {
    std::vector<double> out;
    for (std::size_t s = 0; s < samples(); ++s) {
        out.push_back(population(s, levels));
    }
    return out;
}

EvolutionResult evolve(const Hamiltonian &h, const StateVector &psi0, const EvolveOptions &options) {
    MixedEnsemble single({{1.0, psi0}});
    return run_with_check({&h}, single, options);
}

EvolutionResult evolve_ensemble(const HamiltonianFactory &factory, const MixedEnsemble &ensemble, const EvolveOptions &options) {
    // One Hamiltonian per distinct space, shared by every member that uses it.
    std::vector<Hamiltonian> built;
    std::vector<std::size_t> which;
    for (const auto &m : ensemble.members()) {
        auto it = std::find_if(built.begin(), built.end(), [&](const Hamiltonian &h) { return h.space() == m.state.space(); });
        if (it == built.end()) {
            built.push_back(factory(m.state.space()));
            which.push_back(built.size() - 1);
        } else {
            which.push_back(static_cast<std::size_t>(it - built.begin()));
        }
    }
    std::vector<const Hamiltonian *> hams;
    for (auto w : which) {
        hams.push_back(&built[w]);
    }
    return run_with_check(hams, ensemble, options);
}

EvolutionResult evolve_ensemble(const Hamiltonian &h, const MixedEnsemble &ensemble, const EvolveOptions &options) {
    std::vector<const Hamiltonian *> hams(ensemble.members().size(), &h);
    return run_with_check(hams, ensemble, options);
}

StateVector propagate(const Hamiltonian &h, const StateVector &psi0, double t0, double t1, const StepPolicy &step) {
    if (!(h.space() == psi0.space())) {
        throw std::invalid_argument("propagate: Hamiltonian and state live on different spaces");
    }
    CVec psi = psi0.amplitudes();
    Integrator rk(h, step);
    rk.start(t0);
    auto n = steps_for(t1 - t0, rk.step_bound());
    if (n > 0) {
        rk.run(psi, t0, t1, n);
    }
    return StateVector::unchecked(psi0.space(), rk.to_lab(psi));
}

}  // namespace eggsim
