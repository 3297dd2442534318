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

#include "eggsim/scenarios.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eggsim/derived.h"
#include "eggsim/errors.h"
#include "eggsim/gates.h"
#include "eggsim/hamiltonian.h"

namespace eggsim {

std::size_t member_fock_cutoff(std::size_t n, double alpha_max, double nbar) {
    const double a = std::abs(alpha_max);
    const double nn = static_cast<double>(n);
    const double floor_rule = std::ceil(1.5 * (nbar + a * a) + 10.0);
    // Two estimates of how far D(alpha)|n> reaches: the classical turning
    // point (sqrt n + |alpha|)^2 plus an edge margin, and the mean plus six
    // standard deviations of its number distribution. Either one suffices.
    const double r = std::sqrt(nn) + a;
    const double classical = r * r + 6.0 * r + 10.0;
    const double spread = nn + a * a + 6.0 * a * std::sqrt(2.0 * nn + 1.0) + 8.0;
    return static_cast<std::size_t>(std::max(floor_rule, std::ceil(std::min(classical, spread))));
}

namespace {

struct ModeThermal {
    double nbar;
    double alpha_max;
};

/// Product-thermal ensemble over several modes with fixed internal state.
MixedEnsemble product_thermal_ensemble(
    const std::vector<CVec> &internal, std::size_t levels, const std::vector<ModeThermal> &modes, double epsilon) {
    std::vector<std::vector<std::pair<std::size_t, double>>> per_mode;
    for (const auto &m : modes) {
        per_mode.push_back(thermal_fock_weights(m.nbar, epsilon));
    }
    std::vector<EnsembleMember> members;
    std::vector<std::size_t> idx(modes.size(), 0);
    for (;;) {
        double w = 1.0;
        std::vector<std::size_t> dims;
        std::vector<CVec> locals = internal;
        for (std::size_t p = 0; p < modes.size(); ++p) {
            auto [n, wp] = per_mode[p][idx[p]];
            w *= wp;
            auto dim = member_fock_cutoff(n, modes[p].alpha_max, modes[p].nbar) + 1;
            dims.push_back(dim);
            locals.push_back(fock_vector(dim, n));
        }
        auto space = HilbertSpace::molecules(internal.size(), levels, dims);
        members.push_back({w, product_state(space, locals)});
        // Odometer over the per-mode Fock indices, last mode fastest.
        bool wrapped = true;
        for (std::size_t p = modes.size(); p-- > 0;) {
            if (++idx[p] < per_mode[p].size()) {
                wrapped = false;
                break;
            }
            idx[p] = 0;
        }
        if (wrapped) {
            break;
        }
    }
    // The per-mode weights are each normalised, so the product sums to one up
    // to rounding; renormalise so the ensemble invariant holds exactly.
    double total = 0;
    for (const auto &m : members) {
        total += m.weight;
    }
    for (auto &m : members) {
        m.weight /= total;
    }
    return MixedEnsemble(std::move(members));
}

EvolveOptions options_for(const ExperimentConfig &cfg, std::vector<double> times) {
    EvolveOptions o;
    o.step = StepPolicy::from(cfg.numerics);
    o.sample_times = std::move(times);
    o.norm_tolerance = cfg.numerics.norm_tolerance;
    o.truncation_tolerance = cfg.numerics.truncation_tolerance;
    o.convergence_check = cfg.numerics.convergence_check;
    o.threads = cfg.numerics.threads;
    return o;
}

std::vector<double> uniform_times(double t_end, int samples) {
    if (t_end == 0 || samples <= 1) {
        return {t_end};
    }
    std::vector<double> out;
    for (int k = 0; k < samples; ++k) {
        out.push_back(t_end * k / (samples - 1));
    }
    return out;
}

const ModeSpec &target_mode(const std::vector<ModeSpec> &modes, const ExperimentConfig &cfg) {
    return modes.at(static_cast<std::size_t>(cfg.gate.target_mode));
}

}  // namespace

MixedEnsemble thermal_ensemble(
    const std::vector<CVec> &internal, std::size_t levels, double nbar, double epsilon, double alpha_max) {
    return product_thermal_ensemble(internal, levels, {{nbar, alpha_max}}, epsilon);
}

// ---------------------------------------------------------------------------
// Heating

HeatingResult heating_scenario(const ExperimentConfig &cfg) {
    cfg.validate();
    const auto modes = cfg.resolved_modes();
    const double w = target_mode(modes, cfg).frequency;
    const double b = cfg.heating.participation;
    const ModeSpec mode{w, {b}};
    const double rabi = rabi_frequency(cfg.molecule.dipole_moment, cfg.drive_amplitude, cfg.trap.field_radius);
    const double g = 2.0 * rabi * eta(b, cfg.molecule.mass, w, cfg.trap.field_radius);
    const double eps = cfg.heating.mismatch;

    HeatingResult out;
    out.nbar = thermal_occupation(cfg.heating.temperature, w);
    out.coupling = g;

    const std::vector<DriveTone> tones{
        {Geometry::quadrupole, cfg.molecule.splitting + w, cfg.drive_amplitude * (1 + eps / 2), cfg.drive_phase},
        {Geometry::quadrupole, cfg.molecule.splitting - w, cfg.drive_amplitude * (1 - eps / 2), cfg.drive_phase},
    };
    TrapConfig trap = cfg.trap;
    trap.n_ions = 1;
    const double alpha_max = g * cfg.heating.t_end * (1 + eps / 2);
    auto ensemble = thermal_ensemble({level_vector(2, level_g)}, 2, out.nbar, cfg.heating.thermal_epsilon, alpha_max);
    auto factory = [&](const HilbertSpace &space) {
        return build_E2(space, tones, {mode}, cfg.molecule, trap, Frame::full);
    };
    out.evolution = evolve_ensemble(factory, ensemble, options_for(cfg, uniform_times(cfg.heating.t_end, cfg.heating.samples)));
    for (double t : out.evolution.times) {
        out.analytic.push_back(out.nbar + g * g * t * t);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Two-qubit gate

namespace {

struct MsParameters {
    double rabi;
    double amplitude;
    double detuning;
    double eta1;
    double eta2;
    double target_rate;
    ModeSpec mode;
};

MsParameters ms_parameters(const ExperimentConfig &cfg) {
    cfg.validate();
    if (cfg.trap.n_ions != 2) {
        throw ConfigError("the two-qubit gate needs trap.n_ions = 2");
    }
    const auto modes = cfg.resolved_modes();
    MsParameters p{};
    p.mode = target_mode(modes, cfg);
    const double s = cfg.ms.time_scale;
    p.amplitude = cfg.drive_amplitude * s * cfg.ms.tone_fraction;
    // The two-qubit law is quoted in terms of the full-drive Omega; each tone
    // carries tone_fraction of it.
    p.rabi = rabi_frequency(cfg.molecule.dipole_moment, cfg.drive_amplitude * s, cfg.trap.field_radius);
    p.detuning = cfg.gate.detuning * s;
    p.eta1 = eta(p.mode, 0, cfg.molecule, cfg.trap);
    p.eta2 = eta(p.mode, 1, cfg.molecule, cfg.trap);
    if (p.eta1 * p.eta2 == 0) {
        throw ConfigError("target mode does not couple both molecules");
    }
    p.target_rate = ms_angle(p.rabi, p.eta1, p.eta2, p.detuning, 1.0);
    return p;
}

double measure_ms_rate(const ExperimentConfig &cfg, const MsParameters &p, double offset) {
    constexpr int loops = 50;
    const std::size_t dim = 12;
    const double t_end = loops * 2 * std::numbers::pi / offset;
    auto space = HilbertSpace::molecules(2, 2, {dim});
    TrapConfig trap = cfg.trap;
    trap.x_eq = 0;
    auto h = build_E2(space, ms_tones(cfg, offset, p.amplitude), {p.mode}, cfg.molecule, trap, Frame::full);
    auto step = StepPolicy::from(cfg.numerics);
    auto phase_of = [&](int sign) {
        auto psi0 = product_state(space, {x_vector(2, +1), x_vector(2, sign), fock_vector(dim, 0)});
        auto psi = propagate(h, psi0, 0.0, t_end, step);
        return std::arg(psi0.amplitudes().dot(psi.amplitudes()));
    };
    // exp(-i theta X1 X2): |+X+X> picks up -theta, |+X-X> picks up +theta.
    double theta = -(phase_of(+1) - phase_of(-1)) / 2;
    return theta / t_end;
}

}  // namespace

std::vector<DriveTone> ms_tones(const ExperimentConfig &cfg, double offset, double amplitude) {
    const auto modes = cfg.resolved_modes();
    const double w = target_mode(modes, cfg).frequency;
    return {
        {Geometry::quadrupole, cfg.molecule.splitting + w + offset, amplitude, cfg.drive_phase},
        {Geometry::quadrupole, cfg.molecule.splitting - w - offset, amplitude, cfg.drive_phase},
    };
}

MsCalibration calibrate_ms(const ExperimentConfig &cfg) {
    const auto p = ms_parameters(cfg);
    MsCalibration c;
    c.target_rate = p.target_rate;
    c.offset = p.detuning;
    if (!cfg.ms.calibrate) {
        return c;
    }
    // Start from gamma and from the offset that cancels the rate lost to the
    // counter-rotating sideband: 1/x - 1/(2 w + x) = 1/gamma.
    const double w = p.mode.frequency;
    double x0 = p.detuning;
    double x1 = -w + std::sqrt(w * w + 2 * w * p.detuning);
    double f0 = measure_ms_rate(cfg, p, x0) - p.target_rate;
    double f1 = measure_ms_rate(cfg, p, x1) - p.target_rate;
    c.iterations = 2;
    while (std::abs(f1) > 1e-6 * p.target_rate && c.iterations < 12) {
        if (f1 == f0) {
            break;
        }
        double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = measure_ms_rate(cfg, p, x1) - p.target_rate;
        ++c.iterations;
    }
    if (!(x1 > 0) || std::abs(f1) > 1e-3 * p.target_rate) {
        throw NumericalGuardError("two-qubit gate calibration did not converge (rate error " + std::to_string(f1 / p.target_rate) + ")");
    }
    c.offset = x1;
    c.measured_rate = f1 + p.target_rate;
    return c;
}

MsResult ms_scenario(const ExperimentConfig &cfg) {
    const auto p = ms_parameters(cfg);
    MsResult out;
    out.rabi = p.rabi;
    out.detuning = p.detuning;
    out.eta1 = p.eta1;
    out.eta2 = p.eta2;
    out.validity_ratio = ms_validity_ratio(p.rabi, std::max(std::abs(p.eta1), std::abs(p.eta2)), p.detuning);
    out.calibration = calibrate_ms(cfg);
    out.bell_time = (std::numbers::pi / 4) / p.target_rate;

    const auto tones = ms_tones(cfg, out.calibration.offset, p.amplitude);
    std::vector<ModeSpec> modes{p.mode};
    const double alpha_max = 1.5 * 8.0 * p.rabi * std::max(std::abs(p.eta1), std::abs(p.eta2)) / out.calibration.offset;
    std::vector<ModeThermal> thermal{{thermal_occupation(cfg.gate.temperature, p.mode.frequency), alpha_max}};
    if (cfg.ms.include_spectator_mode) {
        const auto all = cfg.resolved_modes();
        for (std::size_t q = 0; q < all.size(); ++q) {
            if (static_cast<int>(q) != cfg.gate.target_mode) {
                modes.push_back(all[q]);
                thermal.push_back({thermal_occupation(cfg.gate.temperature, all[q].frequency), alpha_max});
            }
        }
    }
    const CVec g = level_vector(2, level_g);
    auto ensemble = product_thermal_ensemble({g, g}, 2, thermal, cfg.ms.thermal_epsilon);

    auto times = uniform_times(cfg.ms.theta_end / p.target_rate, cfg.ms.samples);
    auto near = std::find_if(times.begin(), times.end(), [&](double t) {
        return std::abs(t - out.bell_time) <= 1e-12 * out.bell_time;
    });
    if (near == times.end()) {
        times.push_back(out.bell_time);
        std::sort(times.begin(), times.end());
    } else {
        *near = out.bell_time;
    }
    auto factory = [&](const HilbertSpace &space) {
        return build_E2(space, tones, modes, cfg.molecule, cfg.trap, Frame::full);
    };
    out.evolution = evolve_ensemble(factory, ensemble, options_for(cfg, times));
    for (double t : out.evolution.times) {
        out.theta.push_back(p.target_rate * t);
    }
    out.bell_sample = static_cast<std::size_t>(
        std::find(out.evolution.times.begin(), out.evolution.times.end(), out.bell_time) - out.evolution.times.begin());
    if (out.bell_sample < out.evolution.samples()) {
        out.bell_fidelity = bell_fidelity(out.evolution.internal_density[out.bell_sample], {2, 2}, std::numbers::pi / 4);
    }
    return out;
}

std::vector<FockScanEntry> ms_fock_scan(const ExperimentConfig &cfg, const std::vector<std::size_t> &fock_states) {
    const auto p = ms_parameters(cfg);
    const auto cal = calibrate_ms(cfg);
    const auto tones = ms_tones(cfg, cal.offset, p.amplitude);
    const double t_bell = (std::numbers::pi / 4) / p.target_rate;
    const double alpha_max = 1.5 * 8.0 * p.rabi * std::max(std::abs(p.eta1), std::abs(p.eta2)) / cal.offset;
    std::vector<FockScanEntry> out;
    for (auto n : fock_states) {
        const auto dim = member_fock_cutoff(n, alpha_max, 0.0) + 1;
        auto space = HilbertSpace::molecules(2, 2, {dim});
        auto h = build_E2(space, tones, {p.mode}, cfg.molecule, cfg.trap, Frame::full);
        const CVec g = level_vector(2, level_g);
        auto psi0 = product_state(space, {g, g, fock_vector(dim, n)});
        auto r = evolve(h, psi0, options_for(cfg, {t_bell}));
        out.push_back({n, r.population(0, {level_g, level_g}), r.population(0, {level_e, level_e}),
                       bell_fidelity(r.internal_density[0], {2, 2}, std::numbers::pi / 4)});
    }
    return out;
}

}  // namespace eggsim
