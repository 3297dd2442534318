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

#include "eggsim/designer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include <Eigen/Dense>

#include "eggsim/errors.h"

namespace eggsim {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Dimensionless problem: tau_j = omega_COM T_j, z_1 = 1. The free variables
/// are u = (z_2..z_N, s_1..s_{N-1}) with gap_l = g_min + s_l^2, so every
/// iterate respects the minimum spacing.
struct Problem {
    std::size_t n = 0;
    double d = 0.0;                   // dp_base
    std::array<double, 2> rho{1, 1};  // kick ratios
    double r = 1.0;                   // omega_rel / omega_COM
    double g_min = 0.0;
    double target = 0.0;
    bool balanced = true;
    std::optional<double> tau_end;  // pins tau_N during continuation

    std::size_t unknowns() const { return 2 * (n - 1); }
    std::size_t equations() const { return 5 + (balanced ? 1 : 0) + (tau_end ? 1 : 0); }

    void unpack(const VectorXd &u, std::vector<double> &z, std::vector<double> &tau) const {
        z.assign(n, 1.0);
        tau.assign(n, 0.0);
        for (std::size_t j = 1; j < n; ++j) {
            z[j] = u[static_cast<Eigen::Index>(j - 1)];
            const double s = u[static_cast<Eigen::Index>(n - 1 + j - 1)];
            tau[j] = tau[j - 1] + g_min + s * s;
        }
    }

    VectorXd pack(const std::vector<double> &z, const std::vector<double> &tau) const {
        VectorXd u(static_cast<Eigen::Index>(unknowns()));
        for (std::size_t j = 1; j < n; ++j) {
            u[static_cast<Eigen::Index>(j - 1)] = z[j];
            u[static_cast<Eigen::Index>(n - 1 + j - 1)] = std::sqrt(std::max(0.0, tau[j] - tau[j - 1] - g_min));
        }
        return u;
    }

    double shape(double x) const { return rho[0] * rho[0] * std::sin(x) - rho[1] * rho[1] * std::sin(r * x); }
    double shape_prime(double x) const {
        return rho[0] * rho[0] * std::cos(x) - rho[1] * rho[1] * r * std::cos(r * x);
    }

    /// Residuals and, when `jac` is given, their Jacobian in u.
    VectorXd evaluate(const VectorXd &u, MatrixXd *jac) const {
        std::vector<double> z, tau;
        unpack(u, z, tau);
        const auto m = static_cast<Eigen::Index>(equations());
        const auto nn = static_cast<Eigen::Index>(n);
        VectorXd res(m);
        // Jacobian in the natural variables (z_1..z_N, tau_1..tau_N).
        MatrixXd jn = MatrixXd::Zero(m, 2 * nn);
        const std::array<double, 2> freq{1.0, r};
        for (std::size_t p = 0; p < 2; ++p) {
            std::complex<double> sum = 0;
            for (std::size_t j = 0; j < n; ++j) {
                const auto e = std::polar(rho[p], freq[p] * tau[j]);
                sum += z[j] * e;
                const auto dz = e;
                const auto dt = std::complex<double>(0.0, freq[p]) * z[j] * e;
                const auto jj = static_cast<Eigen::Index>(j);
                jn(2 * p, jj) = dz.real();
                jn(2 * p + 1, jj) = dz.imag();
                jn(2 * p, nn + jj) = dt.real();
                jn(2 * p + 1, nn + jj) = dt.imag();
            }
            res[static_cast<Eigen::Index>(2 * p)] = sum.real();
            res[static_cast<Eigen::Index>(2 * p + 1)] = sum.imag();
        }
        const double pre = 2.0 * d * d;
        double phi = 0.0;
        for (std::size_t j = 1; j < n; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                const double x = tau[j] - tau[k];
                const double sv = shape(x);
                const double sp = shape_prime(x);
                phi += z[j] * z[k] * sv;
                const auto jj = static_cast<Eigen::Index>(j);
                const auto kk = static_cast<Eigen::Index>(k);
                jn(4, jj) += pre * z[k] * sv;
                jn(4, kk) += pre * z[j] * sv;
                jn(4, nn + jj) += pre * z[j] * z[k] * sp;
                jn(4, nn + kk) -= pre * z[j] * z[k] * sp;
            }
        }
        res[4] = pre * phi - target;
        Eigen::Index row = 5;
        if (balanced) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                s += z[j];
                jn(row, static_cast<Eigen::Index>(j)) = 1.0;
            }
            res[row++] = s;
        }
        if (tau_end) {
            res[row] = tau.back() - *tau_end;
            jn(row, 2 * nn - 1) = 1.0;
        }
        if (jac) {
            // Chain rule: z_1 is fixed; tau_j depends on s_l for l < j.
            MatrixXd &j = *jac;
            j = MatrixXd::Zero(m, static_cast<Eigen::Index>(unknowns()));
            for (std::size_t k = 1; k < n; ++k) {
                j.col(static_cast<Eigen::Index>(k - 1)) = jn.col(static_cast<Eigen::Index>(k));
            }
            for (std::size_t l = 1; l < n; ++l) {
                const double s = u[static_cast<Eigen::Index>(n - 1 + l - 1)];
                VectorXd col = VectorXd::Zero(m);
                for (std::size_t k = l; k < n; ++k) {
                    col += jn.col(nn + static_cast<Eigen::Index>(k));
                }
                j.col(static_cast<Eigen::Index>(n - 1 + l - 1)) = 2.0 * s * col;
            }
        }
        return res;
    }
};

struct Solve {
    VectorXd u;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
};

/// Levenberg-Marquardt with a scalar damping term.
Solve levenberg_marquardt(const Problem &prob, VectorXd u, int max_iterations, double tolerance) {
    MatrixXd jac;
    VectorXd res = prob.evaluate(u, &jac);
    double cost = res.squaredNorm();
    double lambda = 1e-3;
    Solve out;
    for (int it = 0; it < max_iterations; ++it) {
        if (!res.allFinite()) {
            break;
        }
        if (res.cwiseAbs().maxCoeff() < tolerance) {
            out.converged = true;
            break;
        }
        const MatrixXd jtj = jac.transpose() * jac;
        const VectorXd g = jac.transpose() * res;
        bool improved = false;
        while (lambda < 1e12) {
            MatrixXd a = jtj;
            a.diagonal().array() += lambda;
            const VectorXd step = a.ldlt().solve(-g);
            const VectorXd trial = u + step;
            MatrixXd trial_jac;
            VectorXd trial_res = prob.evaluate(trial, &trial_jac);
            const double trial_cost = trial_res.squaredNorm();
            if (std::isfinite(trial_cost) && trial_cost < cost) {
                u = trial;
                res = trial_res;
                jac = trial_jac;
                cost = trial_cost;
                lambda = std::max(lambda / 5.0, 1e-15);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!improved) {
            break;
        }
    }
    out.u = u;
    out.residual = res.allFinite() ? res.cwiseAbs().maxCoeff() : std::numeric_limits<double>::infinity();
    out.converged = out.converged || out.residual < tolerance;
    return out;
}

DesignCandidate to_candidate(const Problem &prob, const Solve &s, double tau_max) {
    DesignCandidate c;
    prob.unpack(s.u, c.z, c.tau);
    c.residual = s.residual;
    c.feasible = s.converged && c.tau.back() <= tau_max;
    return c;
}

/// Pushes tau_N down along the solution family while the extra constraint
/// tau_N = target stays solvable.
DesignCandidate shorten(Problem prob, DesignCandidate best, const DesignOptions &opt, double tau_max) {
    if (prob.unknowns() <= prob.equations()) {
        return best;
    }
    const double floor_tau = static_cast<double>(prob.n - 1) * prob.g_min;
    double h = 0.05 * best.tau.back();
    for (int iter = 0; iter < 200 && h > 1e-9 * best.tau.back(); ++iter) {
        const double goal = std::max(floor_tau, best.tau.back() - h);
        if (goal >= best.tau.back()) {
            break;
        }
        prob.tau_end = goal;
        auto s = levenberg_marquardt(prob, prob.pack(best.z, best.tau), opt.max_iterations, opt.tolerance);
        prob.tau_end.reset();
        if (s.converged) {
            auto c = to_candidate(prob, s, tau_max);
            c.residual = prob.evaluate(s.u, nullptr).cwiseAbs().maxCoeff();
            if (c.feasible && c.residual < opt.tolerance) {
                best = c;
                h *= 1.5;
                continue;
            }
        }
        h *= 0.5;
    }
    return best;
}

bool earlier(const DesignCandidate &a, const DesignCandidate &b) {
    const double ta = a.tau.back();
    const double tb = b.tau.back();
    if (std::abs(ta - tb) > 1e-9 * std::max(ta, tb)) {
        return ta < tb;
    }
    return std::lexicographical_compare(a.z.begin(), a.z.end(), b.z.begin(), b.z.end());
}

}  // namespace

DesignOptions design_options(const ExperimentConfig &cfg) {
    DesignOptions o;
    o.max_total_time = cfg.ultrafast.max_total_time;
    o.min_gap = cfg.ultrafast.min_gap;
    o.balanced = cfg.ultrafast.balanced;
    o.seed = cfg.ultrafast.seed;
    o.starts = cfg.ultrafast.starts;
    o.threads = cfg.numerics.threads;
    return o;
}

namespace {

Problem make_problem(const PulseSequence &model, std::size_t n, const DesignOptions &opt) {
    Problem prob;
    prob.n = n;
    prob.d = model.dp_base;
    prob.rho = model.kick_ratio;
    prob.r = model.mode_freqs[1] / model.mode_freqs[0];
    prob.g_min = constants::two_pi * opt.min_gap;
    prob.target = opt.target_phase;
    prob.balanced = opt.balanced;
    return prob;
}

}  // namespace

std::vector<double> design_residuals(const PulseSequence &model, const DesignCandidate &c, const DesignOptions &opt) {
    auto prob = make_problem(model, c.z.size(), opt);
    prob.g_min = 0.0;
    auto r = prob.evaluate(prob.pack(c.z, c.tau), nullptr);
    return {r.data(), r.data() + r.size()};
}

PulseSequence design_sequence(const PulseSequence &model, int n_pulses, const DesignOptions &opt) {
    if (n_pulses < 4) {
        throw ConfigError("design_sequence needs at least 4 pulses (4 closure constraints plus the phase)");
    }
    if (opt.starts < 1 || opt.min_gap < 0 || opt.max_total_time < 0 || !(model.dp_base > 0)) {
        throw ConfigError("design_sequence: invalid options (starts >= 1, min_gap >= 0, dp_base > 0)");
    }
    const auto n = static_cast<std::size_t>(n_pulses);
    const auto prob = make_problem(model, n, opt);
    const double w1 = model.mode_freqs[0];
    const double t_max = opt.max_total_time > 0 ? opt.max_total_time : 10.0 * constants::two_pi / w1;
    const double tau_max = w1 * t_max;
    if (static_cast<double>(n - 1) * prob.g_min >= tau_max) {
        throw ConfigError("design_sequence: the minimum gap leaves no room below the maximum total time");
    }

    std::vector<DesignCandidate> results(static_cast<std::size_t>(opt.starts));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= opt.starts) {
                return;
            }
            std::vector<double> z(n), tau(n, 0.0);
            if (i == 0) {
                // Antisymmetric seed with quarter-period spacing.
                constexpr double pattern[4] = {1, -1, -1, 1};
                for (std::size_t j = 0; j < n; ++j) {
                    z[j] = pattern[j % 4];
                    tau[j] = j == 0 ? 0.0 : tau[j - 1] + std::max(prob.g_min, 0.25 * constants::two_pi);
                }
            } else {
                std::seed_seq seq{
                    static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(i)};
                std::mt19937_64 rng(seq);
                std::uniform_real_distribution<double> kick(-2.0, 2.0);
                const double hi = std::max(prob.g_min * 1.01, std::min(constants::two_pi, tau_max / static_cast<double>(n - 1)));
                std::uniform_real_distribution<double> gap(prob.g_min, hi);
                z[0] = 1.0;
                for (std::size_t j = 1; j < n; ++j) {
                    z[j] = kick(rng);
                    tau[j] = tau[j - 1] + gap(rng);
                }
            }
            auto s = levenberg_marquardt(prob, prob.pack(z, tau), opt.max_iterations, opt.tolerance);
            auto c = to_candidate(prob, s, tau_max);
            if (c.feasible) {
                c = shorten(prob, c, opt, tau_max);
            }
            results[static_cast<std::size_t>(i)] = c;
        }
    };
    const int n_threads = std::clamp(opt.threads, 1, opt.starts);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < n_threads; ++k) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }

    const DesignCandidate *best = nullptr;
    const DesignCandidate *closest = nullptr;
    for (const auto &c : results) {
        if (c.feasible && (!best || earlier(c, *best))) {
            best = &c;
        }
        if (!closest || c.residual < closest->residual) {
            closest = &c;
        }
    }
    if (!best) {
        std::ostringstream msg;
        msg << "design_sequence: no start converged within " << opt.max_iterations << " iterations and T_N <= "
            << t_max << " s; best max residual " << closest->residual;
        if (!closest->tau.empty()) {
            msg << " at T_N = " << closest->tau.back() / w1 << " s";
        }
        throw DesignFailure(msg.str());
    }

    PulseSequence seq = model;
    seq.pulses.clear();
    for (std::size_t j = 0; j < n; ++j) {
        seq.pulses.push_back({best->tau[j] / w1, best->z[j]});
    }
    seq.validate();
    const auto closure = closure_residual(seq);
    const auto phases = branch_phases(seq);
    const double phi = 0.5 * (phases[0] - phases[1]);
    if (std::max(closure[0], closure[1]) >= 1e-9 * seq.dp_base || std::abs(phi - opt.target_phase) >= 1e-6) {
        std::ostringstream msg;
        msg << "design_sequence: converged candidate fails the checks after conversion to seconds (closure "
            << closure[0] << ", " << closure[1] << "; phase error " << phi - opt.target_phase << ")";
        throw DesignFailure(msg.str());
    }
    return seq;
}

PulseSequence design_sequence(const ExperimentConfig &cfg) {
    return design_sequence(empty_sequence(cfg), cfg.ultrafast.n_pulses, design_options(cfg));
}

}  // namespace eggsim
