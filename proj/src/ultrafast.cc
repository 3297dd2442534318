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

#include "eggsim/ultrafast.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "eggsim/derived.h"
#include "eggsim/errors.h"
#include "eggsim/evolve.h"
#include "eggsim/hamiltonian.h"
#include "eggsim/scenarios.h"

namespace eggsim {

namespace {

constexpr std::array<std::array<int, 2>, 4> kBranches{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

int branch_coefficient(int s1, int s2, std::size_t mode) { return mode == 0 ? s1 + s2 : s1 - s2; }

void require_kick_space(const HilbertSpace &space) {
    if (space.n_molecules() != 2 || space.n_modes() != 2 || space.levels(0) != 2 || space.levels(1) != 2) {
        throw std::invalid_argument("ultrafast operators need two two-level molecules and two modes");
    }
}

CMat x_projector(int sign) {
    CVec v = x_vector(2, sign);
    return v * v.adjoint();
}

}  // namespace

void PulseSequence::validate() const {
    if (!(dp_base >= 0) || !std::isfinite(dp_base)) {
        throw ConfigError("pulse sequence: dp_base must be finite and >= 0");
    }
    for (std::size_t p = 0; p < 2; ++p) {
        if (!(mode_freqs[p] > 0) || !(kick_ratio[p] > 0)) {
            throw ConfigError("pulse sequence: mode frequencies and kick ratios must be positive");
        }
        if (!(t_pulse > 0) || t_pulse >= constants::two_pi / mode_freqs[p]) {
            throw ConfigError("pulse sequence: t_pulse must be positive and shorter than every mode period");
        }
    }
    for (std::size_t j = 0; j < pulses.size(); ++j) {
        if (!std::isfinite(pulses[j].time) || !std::isfinite(pulses[j].z)) {
            throw ConfigError("pulse sequence: non-finite pulse " + std::to_string(j));
        }
    }
    if (!pulses.empty() && pulses.front().time != 0.0) {
        throw ConfigError("pulse sequence: the first pulse must sit at T = 0");
    }
    for (std::size_t j = 1; j < pulses.size(); ++j) {
        if (!(pulses[j].time > pulses[j - 1].time)) {
            throw ConfigError("pulse sequence: pulse times must strictly increase (pulse " + std::to_string(j) + ")");
        }
    }
}

PulseSequence empty_sequence(const ExperimentConfig &cfg) {
    auto [com, rel] = two_ion_modes(cfg.trap);
    PulseSequence seq;
    seq.dp_base = cfg.ultrafast.dp_base;
    seq.t_pulse = cfg.ultrafast.t_pulse;
    seq.mode_freqs = {com.frequency, rel.frequency};
    const double eta_com = std::abs(eta(com, 0, cfg.molecule, cfg.trap));
    const double eta_rel = std::abs(eta(rel, 0, cfg.molecule, cfg.trap));
    seq.kick_ratio = {1.0, eta_rel / eta_com};
    return seq;
}

PulseSequence make_sequence(const ExperimentConfig &cfg, const std::vector<double> &times, const std::vector<double> &z) {
    if (times.size() != z.size()) {
        throw ConfigError("make_sequence: times and kicks differ in length");
    }
    PulseSequence seq = empty_sequence(cfg);
    for (std::size_t j = 0; j < times.size(); ++j) {
        seq.pulses.push_back({times[j], z[j]});
    }
    seq.validate();
    return seq;
}

nlohmann::json to_json(const PulseSequence &seq) {
    nlohmann::json pulses = nlohmann::json::array();
    for (const auto &p : seq.pulses) {
        pulses.push_back({{"T_s", p.time}, {"z", p.z}});
    }
    return {
        {"pulses", pulses},
        {"dp_base", seq.dp_base},
        {"mode_freqs", {seq.mode_freqs[0], seq.mode_freqs[1]}},
        {"kick_ratio", {seq.kick_ratio[0], seq.kick_ratio[1]}},
        {"t_pulse_s", seq.t_pulse},
    };
}

PulseSequence sequence_from_json(const nlohmann::json &j) {
    try {
        PulseSequence seq;
        seq.dp_base = j.at("dp_base").get<double>();
        auto freqs = j.at("mode_freqs").get<std::vector<double>>();
        if (freqs.size() != 2) {
            throw ConfigError("pulse sequence: mode_freqs needs two entries");
        }
        seq.mode_freqs = {freqs[0], freqs[1]};
        if (j.contains("kick_ratio")) {
            auto r = j.at("kick_ratio").get<std::vector<double>>();
            if (r.size() != 2) {
                throw ConfigError("pulse sequence: kick_ratio needs two entries");
            }
            seq.kick_ratio = {r[0], r[1]};
        } else {
            // Equal participation magnitudes: eta_p scales as omega_p^(-1/2).
            seq.kick_ratio = {1.0, std::sqrt(freqs[0] / freqs[1])};
        }
        if (j.contains("t_pulse_s")) {
            seq.t_pulse = j.at("t_pulse_s").get<double>();
        }
        for (const auto &p : j.at("pulses")) {
            seq.pulses.push_back({p.at("T_s").get<double>(), p.at("z").get<double>()});
        }
        seq.validate();
        return seq;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("pulse sequence JSON: ") + e.what());
    }
}

Operator kick_propagator(const HilbertSpace &space, double dp1, double dp2, double guard_factor) {
    require_kick_space(space);
    const std::array<double, 2> dp{dp1, dp2};
    Operator out = Operator::zero(space);
    for (const auto &[s1, s2] : kBranches) {
        std::vector<std::pair<std::size_t, CMat>> locals{
            {space.internal_factor(0), x_projector(s1)}, {space.internal_factor(1), x_projector(s2)}};
        for (std::size_t p = 0; p < 2; ++p) {
            const int c = branch_coefficient(s1, s2, p);
            if (c != 0 && dp[p] != 0) {
                const cd alpha(0.0, -c * dp[p]);
                locals.emplace_back(space.mode_factor(p), displacement_matrix(space.fock_dim(p), alpha, guard_factor));
            }
        }
        out = out + embed(space, locals);
    }
    return out;
}

StateVector apply_kick(const StateVector &psi, double dp1, double dp2, double guard_factor) {
    const auto &space = psi.space();
    require_kick_space(space);
    using RowMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto d0 = static_cast<Eigen::Index>(space.fock_dim(0));
    const auto d1 = static_cast<Eigen::Index>(space.fock_dim(1));
    const Eigen::Index block = d0 * d1;
    const std::array<double, 2> dp{dp1, dp2};
    // Internal factors come first, so each (i1, i2) owns one contiguous
    // motional block, laid out as a row-major d0 x d1 matrix.
    auto block_of = [&](const CVec &v, Eigen::Index k) { return Eigen::Map<const RowMat>(v.data() + k * block, d0, d1); };
    CVec out = CVec::Zero(psi.amplitudes().size());
    for (const auto &[s1, s2] : kBranches) {
        const CVec x1 = x_vector(2, s1);
        const CVec x2 = x_vector(2, s2);
        RowMat m = RowMat::Zero(d0, d1);
        for (Eigen::Index i1 = 0; i1 < 2; ++i1) {
            for (Eigen::Index i2 = 0; i2 < 2; ++i2) {
                m += std::conj(x1(i1)) * std::conj(x2(i2)) * block_of(psi.amplitudes(), 2 * i1 + i2);
            }
        }
        const int c0 = branch_coefficient(s1, s2, 0);
        const int c1 = branch_coefficient(s1, s2, 1);
        if (c0 != 0 && dp[0] != 0) {
            m = displacement_matrix(static_cast<std::size_t>(d0), cd(0.0, -c0 * dp[0]), guard_factor) * m;
        }
        if (c1 != 0 && dp[1] != 0) {
            m = m * displacement_matrix(static_cast<std::size_t>(d1), cd(0.0, -c1 * dp[1]), guard_factor).transpose();
        }
        for (Eigen::Index i1 = 0; i1 < 2; ++i1) {
            for (Eigen::Index i2 = 0; i2 < 2; ++i2) {
                Eigen::Map<RowMat>(out.data() + (2 * i1 + i2) * block, d0, d1) += x1(i1) * x2(i2) * m;
            }
        }
    }
    return StateVector::unchecked(space, std::move(out));
}

Operator free_propagator(const HilbertSpace &space, double t, const std::array<double, 2> &mode_freqs) {
    if (space.n_modes() != 2) {
        throw std::invalid_argument("free_propagator: expected two modes");
    }
    const std::size_t dim = space.dimension();
    SpMat m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.reserve(Eigen::VectorXi::Constant(static_cast<Eigen::Index>(dim), 1));
    const auto f0 = space.mode_factor(0);
    const auto f1 = space.mode_factor(1);
    for (std::size_t i = 0; i < dim; ++i) {
        const double phase = mode_freqs[0] * static_cast<double>(space.digit(i, f0)) * t +
                             mode_freqs[1] * static_cast<double>(space.digit(i, f1)) * t;
        m.insert(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = std::polar(1.0, -phase);
    }
    m.makeCompressed();
    return Operator(space, m);
}

std::array<double, 2> closure_residual(const PulseSequence &seq) {
    std::array<double, 2> out{};
    for (std::size_t p = 0; p < 2; ++p) {
        cd sum = 0;
        for (std::size_t j = 0; j < seq.pulses.size(); ++j) {
            sum += seq.kick(p, j) * std::polar(1.0, seq.mode_freqs[p] * seq.pulses[j].time);
        }
        out[p] = std::abs(sum);
    }
    return out;
}

std::array<double, 2> branch_phases(const PulseSequence &seq) {
    // Displacements compose as D(b)D(a) = exp(i Im(b a*)) D(a + b); in the
    // co-rotating frame kick j is b_j = -2i dp_{p,j} e^{i w T_j}.
    std::array<double, 2> out{};
    for (std::size_t p = 0; p < 2; ++p) {
        double sum = 0.0;
        for (std::size_t j = 1; j < seq.pulses.size(); ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                sum += seq.kick(p, j) * seq.kick(p, k) *
                       std::sin(seq.mode_freqs[p] * (seq.pulses[j].time - seq.pulses[k].time));
            }
        }
        out[p] = 4.0 * sum;
    }
    return out;
}

double accumulated_phase(const PulseSequence &seq) {
    const double r3 = std::sqrt(3.0);
    const double freq_ratio = seq.mode_freqs[1] / seq.mode_freqs[0];
    if (std::abs(freq_ratio * r3 - 1.0) > 1e-9 || std::abs(seq.kick_ratio[0] - 1.0) > 1e-12 ||
        std::abs(seq.kick_ratio[1] * seq.kick_ratio[1] / r3 - 1.0) > 1e-9) {
        throw ConfigError(
            "accumulated_phase: mode model is not the two-ion crystal (omega_rel/omega_COM = " +
            std::to_string(freq_ratio) + ", kick ratio " + std::to_string(seq.kick_ratio[1]) + ")");
    }
    const double w1 = seq.mode_freqs[0];
    double sum = 0.0;
    for (std::size_t j = 1; j < seq.pulses.size(); ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            const double dt = seq.pulses[j].time - seq.pulses[k].time;
            sum += seq.kick(0, j) * seq.kick(0, k) * (std::sin(w1 * dt) - r3 * std::sin(w1 / r3 * dt));
        }
    }
    return 2.0 * sum;
}

StateVector apply_sequence(const PulseSequence &seq, const StateVector &psi, double guard_factor) {
    require_kick_space(psi.space());
    const auto &space = psi.space();
    StateVector out = psi;
    for (std::size_t j = 0; j < seq.pulses.size(); ++j) {
        if (j > 0) {
            out = free_propagator(space, seq.pulses[j].time - seq.pulses[j - 1].time, seq.mode_freqs).apply(out);
        }
        out = apply_kick(out, seq.kick(0, j), seq.kick(1, j), guard_factor);
    }
    return out;
}

StateVector apply_reference(const PulseSequence &seq, const StateVector &psi) {
    require_kick_space(psi.space());
    return free_propagator(psi.space(), seq.total_time(), seq.mode_freqs).apply(psi);
}

PhaseExtraction extract_phase(const PulseSequence &seq, const std::vector<CVec> &motion, double guard_factor) {
    if (motion.size() != 2) {
        throw std::invalid_argument("extract_phase: need one motional vector per mode");
    }
    auto space = HilbertSpace::molecules(
        2, 2, {static_cast<std::size_t>(motion[0].size()), static_cast<std::size_t>(motion[1].size())});
    PhaseExtraction out;
    for (std::size_t b = 0; b < 4; ++b) {
        auto psi = product_state(space, {x_vector(2, kBranches[b][0]), x_vector(2, kBranches[b][1]), motion[0], motion[1]});
        auto u = apply_sequence(seq, psi, guard_factor);
        auto ref = apply_reference(seq, psi);
        out.amplitudes[b] = ref.amplitudes().dot(u.amplitudes());
    }
    out.phase = 0.5 * std::arg(out.amplitudes[0] * std::conj(out.amplitudes[1]));
    return out;
}

std::vector<PhasePoint> rotating_frame_path(const PulseSequence &seq, int s1, int s2, std::size_t mode) {
    const int c = branch_coefficient(s1, s2, mode);
    std::vector<PhasePoint> out{{0.0, 0.0, 0.0}};
    cd alpha = 0;
    for (std::size_t j = 0; j < seq.pulses.size(); ++j) {
        alpha += cd(0.0, -c * seq.kick(mode, j)) * std::polar(1.0, seq.mode_freqs[mode] * seq.pulses[j].time);
        out.push_back({seq.pulses[j].time, 2.0 * alpha.real(), 2.0 * alpha.imag()});
    }
    return out;
}

double polygon_area(const std::vector<PhasePoint> &path) {
    double twice = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const auto &a = path[i];
        const auto &b = path[(i + 1) % path.size()];
        twice += a.x * b.p - b.x * a.p;
    }
    return 0.5 * twice;
}

std::array<double, 2> max_excursion(const PulseSequence &seq) {
    std::array<double, 2> out{};
    for (const auto &[s1, s2] : kBranches) {
        for (std::size_t p = 0; p < 2; ++p) {
            for (const auto &v : rotating_frame_path(seq, s1, s2, p)) {
                out[p] = std::max(out[p], 0.5 * std::hypot(v.x, v.p));
            }
        }
    }
    return out;
}

double Trajectory::endpoint_error(std::size_t mode) const {
    const auto &path = modes.at(mode);
    if (path.empty()) {
        return 0.0;
    }
    return std::hypot(path.back().x - path.front().x, path.back().p - path.front().p);
}

double Trajectory::max_radius(std::size_t mode) const {
    double r = 0.0;
    for (const auto &pt : modes.at(mode)) {
        r = std::max(r, std::hypot(pt.x, pt.p));
    }
    return r;
}

Trajectory trajectory(const PulseSequence &seq, int s1, int s2, int points_per_period) {
    if (std::abs(s1) != 1 || std::abs(s2) != 1) {
        throw std::invalid_argument("trajectory: X-basis labels must be +1 or -1");
    }
    if (points_per_period < 4) {
        throw std::invalid_argument("trajectory: need at least 4 points per period");
    }
    Trajectory out;
    out.s1 = s1;
    out.s2 = s2;
    for (std::size_t p = 0; p < 2; ++p) {
        const int c = branch_coefficient(s1, s2, p);
        const double w = seq.mode_freqs[p];
        auto &path = out.modes[p];
        cd alpha = 0;
        auto push = [&](double t, cd a) { path.push_back({t, 2.0 * a.real(), 2.0 * a.imag()}); };
        push(0.0, alpha);
        for (std::size_t j = 0; j < seq.pulses.size(); ++j) {
            if (j > 0) {
                const double t0 = seq.pulses[j - 1].time;
                const double span = seq.pulses[j].time - t0;
                const int n = std::max(2, static_cast<int>(std::ceil(points_per_period * w * span / constants::two_pi)));
                const cd start = alpha;
                for (int k = 1; k <= n; ++k) {
                    const double dt = span * k / n;
                    push(t0 + dt, start * std::polar(1.0, -w * dt));
                }
                alpha = start * std::polar(1.0, -w * span);
            }
            // The kick changes momentum only.
            alpha += cd(0.0, -c * seq.kick(p, j));
            push(seq.pulses[j].time, alpha);
        }
    }
    return out;
}

double pulse_rabi(const PulseSequence &seq, const ExperimentConfig &cfg) {
    auto [com, rel] = two_ion_modes(cfg.trap);
    (void)rel;
    const double eta_com = std::abs(eta(com, 0, cfg.molecule, cfg.trap));
    // Both molecules push the COM mode of |+X+X>, so the displacement is
    // 4 Omega eta t; the base kick 2 dp therefore needs Omega = dp / (2 eta t).
    return seq.dp_base / (2.0 * eta_com * seq.t_pulse);
}

StateVector finite_pulse_sequence(
    const PulseSequence &seq, const ExperimentConfig &cfg, const StateVector &psi, double x_eq) {
    require_kick_space(psi.space());
    ExperimentConfig local = cfg;
    local.trap.x_eq = x_eq;
    local.trap.validate();
    auto [com, rel] = two_ion_modes(local.trap);
    const std::vector<ModeSpec> modes{com, rel};
    const double rabi = pulse_rabi(seq, cfg);
    const double volts = 2.0 * constants::hbar * local.trap.field_radius * rabi / local.molecule.dipole_moment;
    const auto policy = StepPolicy::from(cfg.numerics);
    StateVector out = psi;
    for (const auto &pulse : seq.pulses) {
        if (pulse.z == 0) {
            continue;
        }
        DriveTone tone;
        tone.geometry = Geometry::quadrupole;
        tone.frequency = local.molecule.splitting;
        tone.amplitude = std::abs(pulse.z) * volts;
        tone.phase = pulse.z < 0 ? constants::pi : 0.0;
        auto h = build_E2(psi.space(), {tone}, modes, local.molecule, local.trap, Frame::full);
        out = propagate(h, out, pulse.time - 0.5 * seq.t_pulse, pulse.time + 0.5 * seq.t_pulse, policy);
    }
    return out;
}

namespace {

void check_top_levels(const StateVector &psi, double tolerance, const char *what) {
    for (std::size_t p = 0; p < psi.space().n_modes(); ++p) {
        const double top = top_fock_population(psi, p);
        if (top > tolerance) {
            throw TruncationError(
                std::string(what) + ": top Fock population " + std::to_string(top) + " in mode " + std::to_string(p) +
                " exceeds " + std::to_string(tolerance));
        }
    }
}

std::size_t kick_dim(double excursion) {
    // Finite pulses overshoot the ideal kick by a fraction of (omega t)^2.
    return member_fock_cutoff(0, 1.05 * excursion + 0.1, 0.0) + 1;
}

}  // namespace

XeqReport xeq_robustness_check(const PulseSequence &seq, const ExperimentConfig &cfg, double x_eq) {
    seq.validate();
    const auto reach = max_excursion(seq);
    XeqReport report;
    report.x_eq = x_eq;
    report.formula_phase = accumulated_phase(seq);
    auto numeric_phase = [&](double offset) {
        std::array<cd, 2> amp{};
        for (std::size_t b = 0; b < 2; ++b) {
            const auto [s1, s2] = kBranches[b];
            // Only one mode moves in each branch; the other keeps a small
            // truncation, which is exact because its coupling vanishes.
            std::vector<std::size_t> dims{3, 3};
            const std::size_t driven = b == 0 ? 0 : 1;
            dims[driven] = kick_dim(reach[driven]);
            auto space = HilbertSpace::molecules(2, 2, dims);
            auto psi0 = product_state(space, {x_vector(2, s1), x_vector(2, s2), fock_vector(dims[0], 0), fock_vector(dims[1], 0)});
            auto psi = finite_pulse_sequence(seq, cfg, psi0, offset);
            check_top_levels(psi, cfg.numerics.truncation_tolerance, "xeq_robustness_check");
            amp[b] = psi0.amplitudes().dot(psi.amplitudes());
            report.min_return = std::min(report.min_return, std::norm(amp[b]));
        }
        return 0.5 * std::arg(amp[0] * std::conj(amp[1]));
    };
    report.phase_reference = numeric_phase(0.0);
    report.phase_offset = x_eq == 0.0 ? report.phase_reference : numeric_phase(x_eq);
    report.deviation = std::abs(report.phase_offset - report.phase_reference);
    return report;
}

double impulse_overlap(const PulseSequence &seq, const ExperimentConfig &cfg, double z) {
    PulseSequence single = seq;
    single.pulses = {{0.0, z}};
    single.validate();
    const std::size_t d1 = kick_dim(2.0 * std::abs(single.kick(0, 0)));
    const std::size_t d2 = kick_dim(2.0 * std::abs(single.kick(1, 0)));
    auto space = HilbertSpace::molecules(2, 2, {d1, d2});
    auto psi0 = product_state(
        space, {level_vector(2, level_g), level_vector(2, level_g), fock_vector(d1, 0), fock_vector(d2, 0)});
    auto ideal = kick_propagator(space, single.kick(0, 0), single.kick(1, 0), cfg.numerics.guard_factor).apply(psi0);
    auto finite = finite_pulse_sequence(single, cfg, psi0, 0.0);
    return std::norm(ideal.amplitudes().dot(finite.amplitudes()));
}

}  // namespace eggsim
