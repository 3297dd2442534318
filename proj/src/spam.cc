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

#include "eggsim/spam.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "eggsim/derived.h"
#include "eggsim/errors.h"
#include "eggsim/gates.h"
#include "eggsim/scenarios.h"

namespace eggsim {

namespace {

constexpr double separation_tolerance = 1e-6;

double mode_frequency(const ExperimentConfig &cfg) {
    return cfg.resolved_modes().at(static_cast<std::size_t>(cfg.gate.target_mode)).frequency;
}

/// Swap |g> <-> |a>: the ideal shelving transfer.
CMat shelve_matrix() {
    CMat s = CMat::Identity(3, 3);
    s(level_g, level_g) = 0;
    s(level_a, level_a) = 0;
    s(level_g, level_a) = 1;
    s(level_a, level_g) = 1;
    return s;
}

std::size_t sample_index(const std::vector<double> &p, double u) {
    double acc = 0;
    for (std::size_t m = 0; m < p.size(); ++m) {
        acc += p[m];
        if (u < acc) {
            return m;
        }
    }
    return p.size() - 1;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace

double default_spam_threshold(double nbar, double alpha) {
    return std::max(4.0 * nbar, alpha * alpha / 4.0);
}

SpamDistributions spam_distributions(const ExperimentConfig &cfg) {
    cfg.validate();
    const double w = mode_frequency(cfg);
    const double rabi = rabi_frequency(cfg.molecule.dipole_moment, cfg.drive_amplitude, cfg.trap.field_radius);
    const double e = eta(cfg.spam.participation, cfg.molecule.mass, w, cfg.trap.field_radius);
    SpamDistributions d;
    d.alpha = 2.0 * rabi * e * cfg.spam.drive_time;
    d.nbar = thermal_occupation(cfg.spam.temperature, w);
    const auto weights = thermal_fock_weights(d.nbar, cfg.spam.thermal_epsilon);
    const std::size_t n_top = weights.back().first;
    const double guard_nmax = d.alpha * d.alpha / cfg.numerics.guard_factor;
    const std::size_t dim = std::max<std::size_t>(
        member_fock_cutoff(n_top, d.alpha, d.nbar), static_cast<std::size_t>(std::ceil(guard_nmax))) + 1;
    d.dark.assign(dim, 0.0);
    d.bright.assign(dim, 0.0);
    for (const auto &[n, p] : weights) {
        d.dark[n] += p;
    }
    // |D(+-i alpha)_{mn}|^2 is the same for both signs.
    const CMat cols = displaced_fock_columns(dim, cd(0.0, -d.alpha), n_top + 1);
    for (const auto &[n, p] : weights) {
        const double top = std::norm(cols(dim - 1, n)) + std::norm(cols(dim - 2, n));
        if (top > cfg.numerics.truncation_tolerance) {
            throw TruncationError("SPAM displacement leaks into the top Fock levels (n_max = " + std::to_string(dim - 1) + ")");
        }
        for (std::size_t m = 0; m < dim; ++m) {
            d.bright[m] += p * std::norm(cols(m, n));
        }
    }
    return d;
}

CVec spam_input_state(const std::string &name) {
    if (name == "g") {
        return level_vector(3, level_g);
    }
    if (name == "e") {
        return level_vector(3, level_e);
    }
    if (name == "plus") {
        return x_vector(3, +1);
    }
    throw ConfigError("unknown SPAM input '" + name + "' (expected g, e or plus)");
}

SpamRecord spam_protocol(const CVec &internal, const ExperimentConfig &cfg, std::optional<double> threshold) {
    if (internal.size() != 3 || std::abs(internal.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("spam_protocol needs a normalised 3-level internal state");
    }
    const auto dist = spam_distributions(cfg);
    SpamRecord rec;
    rec.alpha = dist.alpha;
    rec.nbar = dist.nbar;
    rec.threshold = threshold.value_or(cfg.spam.threshold > 0 ? cfg.spam.threshold : default_spam_threshold(dist.nbar, dist.alpha));

    auto is_bright = [&](std::size_t m) { return static_cast<double>(m) - dist.nbar >= rec.threshold; };
    double dark_mean = 0;
    double bright_mean = 0;
    for (std::size_t m = 0; m < dist.dark.size(); ++m) {
        if (is_bright(m)) {
            rec.dark_error += dist.dark[m];
        } else {
            rec.bright_error += dist.bright[m];
        }
        dark_mean += static_cast<double>(m) * dist.dark[m];
        bright_mean += static_cast<double>(m) * dist.bright[m];
    }
    if (rec.dark_error > separation_tolerance || rec.bright_error > separation_tolerance) {
        throw AmbiguousThresholdError(
            "ambiguous threshold " + fmt(rec.threshold) + ": undisplaced mean energy " + fmt(dark_mean - dist.nbar) +
                ", displaced mean energy " + fmt(bright_mean - dist.nbar) + ", misclassification " + fmt(rec.dark_error) +
                " / " + fmt(rec.bright_error),
            dark_mean - dist.nbar, bright_mean - dist.nbar);
    }

    // Internal mapping: shelve then Hadamard-equivalent rotation.
    const CVec shelved = shelve_matrix() * internal;
    const CMat had = rotation_matrix(3, std::numbers::pi / 2, std::numbers::pi / 2);
    const CVec mapped = had * shelved;
    const double p_a = std::norm(mapped[level_a]);
    const double p_plus = std::norm(x_vector(3, +1).dot(mapped));
    const double p_minus = std::norm(x_vector(3, -1).dot(mapped));
    rec.log.push_back({"shelve", "g -> a; populations g,e,a = " + fmt(std::norm(shelved[0])) + "," + fmt(std::norm(shelved[1])) + "," + fmt(std::norm(shelved[2]))});
    rec.log.push_back({"hadamard", "R_Y(pi/2) on (g,e); P(+X) = " + fmt(p_plus) + ", P(-X) = " + fmt(p_minus) + ", P(a) = " + fmt(p_a)});
    rec.log.push_back({"displace", "t_d = " + fmt(cfg.spam.drive_time) + " s, |alpha| = " + fmt(dist.alpha) + ", |alpha|^2 = " + fmt(dist.alpha * dist.alpha)});

    std::vector<double> p_m(dist.dark.size());
    for (std::size_t m = 0; m < p_m.size(); ++m) {
        p_m[m] = p_a * dist.dark[m] + (p_plus + p_minus) * dist.bright[m];
    }
    rec.p_bright = p_a * rec.dark_error + (p_plus + p_minus) * (1.0 - rec.bright_error);

    std::mt19937_64 rng(cfg.spam.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    rec.measured_n = sample_index(p_m, uni(rng));
    rec.delta_e = static_cast<double>(rec.measured_n) - dist.nbar;
    rec.bright = is_bright(rec.measured_n);
    rec.label = rec.bright ? "e" : "g";
    rec.log.push_back({"detect", std::string(rec.bright ? "bright" : "dark") + " herald, n = " + std::to_string(rec.measured_n) +
                                    ", dE = " + fmt(rec.delta_e) + " hbar w, threshold " + fmt(rec.threshold)});

    // Repeat: the projected branch is mapped back to |e> or |g>, the mode is
    // re-thermalised, and the whole sequence runs again.
    const double p_same = rec.bright ? 1.0 - rec.bright_error : 1.0 - rec.dark_error;
    const auto &repeat_dist = rec.bright ? dist.bright : dist.dark;
    const std::size_t m2 = sample_index(repeat_dist, uni(rng));
    rec.repeat_bright = is_bright(m2);
    rec.repeat_probability = p_same;
    rec.log.push_back({"repeat", std::string(rec.repeat_bright ? "bright" : "dark") + " herald, n = " + std::to_string(m2) +
                                    ", P(same herald) = " + fmt(p_same)});
    return rec;
}

HeraldLoopResult herald_loop(double success_probability, std::uint64_t seed, int max_attempts) {
    if (!(success_probability >= 0 && success_probability <= 1) || max_attempts < 1) {
        throw std::invalid_argument("herald_loop needs 0 <= p <= 1 and max_attempts >= 1");
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution trial(success_probability);
    HeraldLoopResult r;
    while (r.attempts < max_attempts) {
        ++r.attempts;
        if (trial(rng)) {
            r.success = true;
            break;
        }
    }
    return r;
}

nlohmann::json to_json(const SpamRecord &r) {
    nlohmann::json log = nlohmann::json::array();
    for (const auto &s : r.log) {
        log.push_back({{"step", s.name}, {"detail", s.detail}});
    }
    return {
        {"herald", r.bright ? "bright" : "dark"},
        {"delta_e", r.delta_e},
        {"measured_n", r.measured_n},
        {"label", r.label},
        {"threshold", r.threshold},
        {"p_bright", r.p_bright},
        {"dark_error", r.dark_error},
        {"bright_error", r.bright_error},
        {"repeat_herald", r.repeat_bright ? "bright" : "dark"},
        {"repeat_probability", r.repeat_probability},
        {"alpha", r.alpha},
        {"nbar", r.nbar},
        {"log", log},
    };
}

}  // namespace eggsim
