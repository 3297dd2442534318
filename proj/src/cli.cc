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


#include "eggsim/cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "eggsim/derived.h"
#include "eggsim/designer.h"
#include "eggsim/errors.h"
#include "eggsim/io.h"
#include "eggsim/scenarios.h"
#include "eggsim/spam.h"
#include "eggsim/ultrafast.h"

namespace eggsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kInfidelityBudget = 1e-4;

double max_abs_eta(const ModeSpec &mode, const ExperimentConfig &cfg) {
    double best = 0;
    for (std::size_t i = 0; i < mode.participation.size(); ++i) {
        best = std::max(best, std::abs(eta(mode, i, cfg.molecule, cfg.trap)));
    }
    return best;
}

double full_rabi(const ExperimentConfig &cfg) {
    return rabi_frequency(cfg.molecule.dipole_moment, cfg.drive_amplitude, cfg.trap.field_radius);
}

double heating_eta(const ExperimentConfig &cfg) {
    return eta(cfg.heating.participation, cfg.molecule.mass, cfg.trap.secular_frequency, cfg.trap.field_radius);
}

std::string sci(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

}  // namespace

json derived_parameters(const ExperimentConfig &cfg) {
    cfg.validate();
    const double rabi = full_rabi(cfg);
    const auto modes = cfg.resolved_modes();
    json mode_list = json::array();
    for (std::size_t p = 0; p < modes.size(); ++p) {
        json etas = json::array();
        for (std::size_t i = 0; i < modes[p].participation.size(); ++i) {
            etas.push_back(eta(modes[p], i, cfg.molecule, cfg.trap));
        }
        mode_list.push_back({{"index", p}, {"frequency_rad_s", modes[p].frequency}, {"eta", etas}});
    }
    const auto &target = modes.at(static_cast<std::size_t>(cfg.gate.target_mode));
    json out;
    out["rabi_frequency_rad_s"] = rabi;
    out["rabi_frequency_MHz"] = rabi / constants::two_pi / 1e6;
    out["modes"] = mode_list;
    out["heating_eta"] = heating_eta(cfg);
    out["nbar"] = {
        {"heating", thermal_occupation(cfg.heating.temperature, cfg.trap.secular_frequency)},
        {"gate", thermal_occupation(cfg.gate.temperature, target.frequency)},
        {"spam", thermal_occupation(cfg.spam.temperature, cfg.trap.secular_frequency)}};
    if (target.participation.size() >= 2) {
        const double e1 = eta(target, 0, cfg.molecule, cfg.trap);
        const double e2 = eta(target, 1, cfg.molecule, cfg.trap);
        if (e1 * e2 != 0) {
            out["gate_time_s"] = ms_gate_time(rabi, e1, e2, cfg.gate.detuning);
            out["bell_time_s"] = ms_gate_time(rabi, e1, e2, cfg.gate.detuning) / 4;
        }
    }
    out["ms_validity_ratio"] = ms_validity_ratio(rabi, max_abs_eta(target, cfg), cfg.gate.detuning);
    out["xeq_tolerance_m"] = xeq_tolerance(
        kInfidelityBudget, target.frequency, cfg.gate.detuning, cfg.trap.field_radius, cfg.drive_amplitude,
        cfg.molecule.dipole_moment);
    const double q = quadrupole_carrier_rate(cfg.drive_amplitude, cfg.trap.field_radius);
    out["quadrupole_carrier_rate_rad_s"] = q;
    out["quadrupole_carrier_rate_Hz"] = q / constants::two_pi;
    out["config"] = config_to_json(cfg);
    return out;
}

std::vector<ValidationRow> validation_report(const ExperimentConfig &cfg) {
    cfg.validate();
    std::vector<ValidationRow> rows;
    rows.push_back({CheckStatus::pass, "type invariants", "ok", "config parses and every invariant holds"});

    const auto modes = cfg.resolved_modes();
    double w_max = 0;
    for (const auto &m : modes) {
        w_max = std::max(w_max, m.frequency);
    }
    const double split_ratio = cfg.molecule.splitting / w_max;
    rows.push_back({split_ratio >= 100 ? CheckStatus::pass : CheckStatus::fail, "splitting / mode frequency",
                    sci(split_ratio), "needs >= 100 for the sideband picture"});

    const double rabi = full_rabi(cfg);
    const double rwa = rabi > 0 ? cfg.molecule.splitting / rabi : INFINITY;
    rows.push_back({rwa >= 10 ? CheckStatus::pass : CheckStatus::warn, "splitting / Rabi frequency", sci(rwa),
                    "counter-rotating carrier terms matter below 10"});

    const auto &target = modes.at(static_cast<std::size_t>(cfg.gate.target_mode));
    const double validity = ms_validity_ratio(rabi, max_abs_eta(target, cfg), cfg.gate.detuning);
    rows.push_back({validity > 10 ? CheckStatus::pass : CheckStatus::warn, "two-qubit validity gamma/(2 Omega eta)",
                    sci(validity), "the analytic gate law assumes > 10"});

    const double tol = xeq_tolerance(
        kInfidelityBudget, target.frequency, cfg.gate.detuning, cfg.trap.field_radius, cfg.drive_amplitude,
        cfg.molecule.dipole_moment);
    rows.push_back({cfg.trap.x_eq <= tol ? CheckStatus::pass : CheckStatus::warn, "x_eq within carrier budget",
                    sci(cfg.trap.x_eq) + " m", "tolerance " + sci(tol) + " m for 1e-4 infidelity"});

    const double nbar_h = thermal_occupation(cfg.heating.temperature, cfg.trap.secular_frequency);
    const double alpha_h = 2 * rabi * heating_eta(cfg) * cfg.heating.t_end;
    const auto weights = thermal_fock_weights(nbar_h, cfg.heating.thermal_epsilon);
    const auto cutoff = member_fock_cutoff(weights.back().first, alpha_h, nbar_h);
    rows.push_back({cutoff <= 2000 ? CheckStatus::pass : CheckStatus::warn, "heating Fock cutoff",
                    std::to_string(cutoff),
                    "|alpha|^2 = " + sci(alpha_h * alpha_h) + ", " + std::to_string(weights.size()) +
                        " thermal members"});

    try {
        const auto dist = spam_distributions(cfg);
        const double thr = cfg.spam.threshold > 0 ? cfg.spam.threshold : default_spam_threshold(dist.nbar, dist.alpha);
        double dark_err = 0, bright_err = 0;
        for (std::size_t m = 0; m < dist.dark.size(); ++m) {
            if (static_cast<double>(m) - dist.nbar >= thr) {
                dark_err += dist.dark[m];
            } else {
                bright_err += dist.bright[m];
            }
        }
        const double worst = std::max(dark_err, bright_err);
        rows.push_back({worst <= 1e-6 ? CheckStatus::pass : CheckStatus::warn, "SPAM threshold separation",
                        sci(worst), "misclassification at threshold " + sci(thr)});
    } catch (const TruncationError &e) {
        rows.push_back({CheckStatus::warn, "SPAM threshold separation", "n/a", e.what()});
    }
    return rows;
}

std::string format_validation(const std::vector<ValidationRow> &rows) {
    std::size_t wc = 5, wv = 5;
    for (const auto &r : rows) {
        wc = std::max(wc, r.check.size());
        wv = std::max(wv, r.value.size());
    }
    auto pad = [](std::string s, std::size_t w) {
        s.resize(std::max(w, s.size()), ' ');
        return s;
    };
    std::ostringstream os;
    os << pad("status", 8) << pad("check", wc + 2) << pad("value", wv + 2) << "detail\n";
    for (const auto &r : rows) {
        const char *s = r.status == CheckStatus::pass ? "PASS" : r.status == CheckStatus::warn ? "WARN" : "FAIL";
        os << pad(s, 8) << pad(r.check, wc + 2) << pad(r.value, wv + 2) << r.detail << "\n";
    }
    return os.str();
}

namespace {

struct Options {
    std::string config;
    std::string out = ".";
    std::vector<std::string> overrides;
    bool convergence_check = false;
    int threads = 0;
    std::string sequence;  // ultrafast-sim input
};

ExperimentConfig resolve_config(const Options &o) {
    json doc = json::object();
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) {
            throw ConfigError("cannot open config file '" + o.config + "'");
        }
        try {
            doc = json::parse(in);
        } catch (const json::parse_error &e) {
            throw ConfigError("cannot parse '" + o.config + "': " + e.what());
        }
    }
    for (const auto &a : o.overrides) {
        apply_override(doc, a);
    }
    if (o.convergence_check) {
        apply_override(doc, "numerics.convergence_check=true");
    }
    if (o.threads > 0) {
        apply_override(doc, "numerics.threads=" + std::to_string(o.threads));
    }
    try {
        return config_from_json(doc);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

json evolution_diagnostics(const EvolutionResult &r) {
    json d = {
        {"steps", r.steps},
        {"dt_s", r.dt},
        {"members", r.weights.size()},
        {"max_norm_drift", r.max_norm_drift},
        {"norm_flagged", r.norm_flagged},
        {"max_top_population", r.max_top_population}};
    d["convergence_delta"] = r.convergence_delta ? json(*r.convergence_delta) : json(nullptr);
    return d;
}

void write(const fs::path &dir, const std::string &name, const std::string &text, std::ostream &out) {
    write_text_atomic(dir / name, text);
    out << "wrote " << (dir / name).string() << "\n";
}

int cmd_params(const ExperimentConfig &cfg, std::ostream &out) {
    out << json_text(derived_parameters(cfg));
    return kExitOk;
}

int cmd_heating(const ExperimentConfig &cfg, const fs::path &dir, std::ostream &out) {
    const auto r = heating_scenario(cfg);
    const auto numeric = r.evolution.mean_n_trace(0);
    CsvTable csv({"t_s", "mean_n", "analytic_mean_n"});
    for (std::size_t k = 0; k < r.evolution.times.size(); ++k) {
        csv.add_row(std::vector<double>{r.evolution.times[k], numeric[k], r.analytic[k]});
    }
    double worst = 0;
    for (std::size_t k = 0; k < numeric.size(); ++k) {
        worst = std::max(worst, std::abs(numeric[k] - r.analytic[k]) / r.analytic[k]);
    }
    json j = {
        {"config", config_to_json(cfg)},
        {"nbar", r.nbar},
        {"coupling_rad_s", r.coupling},
        {"times_s", r.evolution.times},
        {"mean_n", numeric},
        {"analytic_mean_n", r.analytic},
        {"max_relative_deviation", worst},
        {"diagnostics", evolution_diagnostics(r.evolution)}};
    std::vector<double> t_us;
    for (double t : r.evolution.times) {
        t_us.push_back(t * 1e6);
    }
    PlotSpec plot{"Motional heating", "t (us)", "<n>", {}};
    plot.series.push_back({"numeric", t_us, numeric, "#1f77b4", false, true, false});
    plot.series.push_back({"nbar + (2 Omega eta t)^2", t_us, r.analytic, "#d62728", true, false, true});
    write(dir, "heating.csv", csv.str(), out);
    write(dir, "heating.json", json_text(j), out);
    write(dir, "heating.svg", svg_plot(plot), out);
    return kExitOk;
}

int cmd_ms(const ExperimentConfig &cfg, const fs::path &dir, std::ostream &out) {
    const auto r = ms_scenario(cfg);
    const auto &ev = r.evolution;
    CsvTable csv({"t_s", "theta", "p_gg", "p_ee", "p_ge_eg", "cos2_theta", "sin2_theta"});
    std::vector<double> t_ms, pgg, pee, c2, s2;
    double worst = 0;
    for (std::size_t k = 0; k < ev.samples(); ++k) {
        const double gg = ev.population(k, {0, 0});
        const double ee = ev.population(k, {1, 1});
        const double c = std::cos(r.theta[k]), s = std::sin(r.theta[k]);
        csv.add_row(std::vector<double>{ev.times[k], r.theta[k], gg, ee, 1 - gg - ee, c * c, s * s});
        worst = std::max({worst, std::abs(gg - c * c), std::abs(ee - s * s)});
        t_ms.push_back(ev.times[k] * 1e3);
        pgg.push_back(gg);
        pee.push_back(ee);
        c2.push_back(c * c);
        s2.push_back(s * s);
    }
    json j = {
        {"config", config_to_json(cfg)},
        {"rabi_rad_s", r.rabi},
        {"detuning_rad_s", r.detuning},
        {"eta", {r.eta1, r.eta2}},
        {"validity_ratio", r.validity_ratio},
        {"bell_time_s", r.bell_time},
        {"bell_fidelity", r.bell_fidelity},
        {"max_population_deviation", worst},
        {"calibration",
         {{"offset_rad_s", r.calibration.offset},
          {"measured_rate", r.calibration.measured_rate},
          {"target_rate", r.calibration.target_rate},
          {"iterations", r.calibration.iterations}}},
        {"diagnostics", evolution_diagnostics(ev)}};
    if (!cfg.ms.fock_states.empty()) {
        std::vector<std::size_t> ns(cfg.ms.fock_states.begin(), cfg.ms.fock_states.end());
        json scan = json::array();
        for (const auto &e : ms_fock_scan(cfg, ns)) {
            scan.push_back({{"n", e.n}, {"p_gg", e.p_gg}, {"p_ee", e.p_ee}, {"fidelity", e.fidelity}});
        }
        j["fock_scan"] = scan;
    }
    PlotSpec plot{"Two-qubit gate populations", "t (ms)", "population", {}};
    plot.series.push_back({"P_gg", t_ms, pgg, "#1f77b4", false, true, false});
    plot.series.push_back({"P_ee", t_ms, pee, "#d62728", false, true, false});
    plot.series.push_back({"cos^2 theta", t_ms, c2, "#1f77b4", true, false, true});
    plot.series.push_back({"sin^2 theta", t_ms, s2, "#d62728", true, false, true});
    write(dir, "ms_gate.csv", csv.str(), out);
    write(dir, "ms_gate.json", json_text(j), out);
    write(dir, "ms_gate.svg", svg_plot(plot), out);
    return kExitOk;
}

int cmd_spam(const ExperimentConfig &cfg, const fs::path &dir, std::ostream &out) {
    const auto rec = spam_protocol(spam_input_state(cfg.spam.input), cfg);
    json j = {{"config", config_to_json(cfg)}, {"input", cfg.spam.input}, {"record", to_json(rec)}};
    write(dir, "spam.json", json_text(j), out);
    return kExitOk;
}

json sequence_document(const PulseSequence &seq, const ExperimentConfig &cfg) {
    json j = to_json(seq);
    const auto c = closure_residual(seq);
    const auto ex = max_excursion(seq);
    j["config"] = config_to_json(cfg);
    j["report"] = {
        {"closure_residual", {c[0], c[1]}},
        {"phase", accumulated_phase(seq)},
        {"total_time_s", seq.total_time()},
        {"total_time_com_periods", seq.total_time() * seq.mode_freqs[0] / constants::two_pi},
        {"max_excursion", {ex[0], ex[1]}}};
    return j;
}

int cmd_design(const ExperimentConfig &cfg, const fs::path &dir, std::ostream &out) {
    const auto seq = design_sequence(cfg);
    write(dir, "sequence.json", json_text(sequence_document(seq, cfg)), out);
    return kExitOk;
}

const char *branch_name(int s1, int s2) {
    if (s1 > 0) {
        return s2 > 0 ? "++" : "+-";
    }
    return s2 > 0 ? "-+" : "--";
}

int cmd_ultrafast_sim(const ExperimentConfig &cfg, const Options &o, const fs::path &dir, std::ostream &out) {
    PulseSequence seq;
    if (o.sequence.empty()) {
        seq = design_sequence(cfg);
    } else {
        std::ifstream in(o.sequence);
        if (!in) {
            throw ConfigError("cannot open sequence file '" + o.sequence + "'");
        }
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error &e) {
            throw ConfigError("cannot parse '" + o.sequence + "': " + e.what());
        }
        seq = sequence_from_json(doc);
    }

    CsvTable csv({"mode", "branch", "x_over_x0", "p_over_p0", "t_s"});
    json branches = json::array();
    PlotSpec plot{"Phase-space trajectories", "x / x0", "p / p0", {}};
    plot.equal_aspect = true;
    const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    int colour = 0;
    double worst_end = 0, worst_idle = 0;
    for (int s1 : {1, -1}) {
        for (int s2 : {1, -1}) {
            const auto tr = trajectory(seq, s1, s2);
            const std::size_t driven = s1 == s2 ? 0 : 1;
            for (std::size_t m = 0; m < 2; ++m) {
                for (const auto &pt : tr.modes[m]) {
                    csv.add_row(std::vector<std::string>{
                        m == 0 ? "com" : "rel", branch_name(s1, s2), format_number(pt.x), format_number(pt.p),
                        format_number(pt.t)});
                }
            }
            worst_end = std::max({worst_end, tr.endpoint_error(0), tr.endpoint_error(1)});
            worst_idle = std::max(worst_idle, tr.max_radius(1 - driven));
            branches.push_back({
                {"branch", branch_name(s1, s2)},
                {"driven_mode", driven == 0 ? "com" : "rel"},
                {"endpoint_error", {tr.endpoint_error(0), tr.endpoint_error(1)}},
                {"max_radius", {tr.max_radius(0), tr.max_radius(1)}},
                {"rotating_frame_area", polygon_area(rotating_frame_path(seq, s1, s2, driven))}});
            PlotSeries s;
            s.name = std::string(branch_name(s1, s2)) + (driven == 0 ? " (com)" : " (rel)");
            s.color = colors[colour++];
            for (const auto &pt : tr.modes[driven]) {
                s.x.push_back(pt.x);
                s.y.push_back(pt.p);
            }
            plot.series.push_back(std::move(s));
        }
    }

    const auto ex = max_excursion(seq);
    const double reach = std::max(ex[0], ex[1]) + 2.0;
    const auto dim = static_cast<std::size_t>(std::ceil(reach * reach + 8 * reach + 12));
    struct Probe {
        std::string name;
        std::vector<CVec> motion;
    };
    const std::vector<Probe> probes = {
        {"vacuum", {fock_vector(dim, 0), fock_vector(dim, 0)}},
        {"coherent(1+1i, 0.5)", {coherent_vector(dim, {1, 1}), coherent_vector(dim, {0.5, 0})}},
        {"coherent(-2, 2i)", {coherent_vector(dim, {-2, 0}), coherent_vector(dim, {0, 2})}},
        {"fock(1, 2)", {fock_vector(dim, 1), fock_vector(dim, 2)}},
    };
    json phases = json::array();
    double lo = INFINITY, hi = -INFINITY, min_amp = 1;
    for (const auto &p : probes) {
        const auto e = extract_phase(seq, p.motion, cfg.numerics.guard_factor);
        lo = std::min(lo, e.phase);
        hi = std::max(hi, e.phase);
        for (const auto &a : e.amplitudes) {
            min_amp = std::min(min_amp, std::abs(a));
        }
        phases.push_back({{"state", p.name}, {"phase", e.phase}});
    }
    const auto c = closure_residual(seq);
    json report = {
        {"config", config_to_json(cfg)},
        {"sequence", to_json(seq)},
        {"closure_residual", {c[0], c[1]}},
        {"formula_phase", accumulated_phase(seq)},
        {"extracted_phases", phases},
        {"phase_spread", hi - lo},
        {"min_branch_amplitude", min_amp},
        {"fock_dim", dim},
        {"max_endpoint_error", worst_end},
        {"max_idle_mode_excursion", worst_idle},
        {"branches", branches}};
    if (cfg.ultrafast.x_eq_check > 0) {
        const auto x = xeq_robustness_check(seq, cfg, cfg.ultrafast.x_eq_check);
        report["x_eq_check"] = {
            {"x_eq_m", x.x_eq},
            {"phase_reference", x.phase_reference},
            {"phase_offset", x.phase_offset},
            {"deviation", x.deviation},
            {"min_return", x.min_return}};
    }
    write(dir, "trajectory.csv", csv.str(), out);
    write(dir, "trajectory.svg", svg_plot(plot), out);
    write(dir, "phase_report.json", json_text(report), out);
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"eggsim: electric-field-gradient gate simulator for trapped polar molecular ions", "eggsim"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App *sub, bool writes) {
        sub->add_option("--config", o.config, "JSON config file (defaults are used when omitted)");
        sub->add_option("--set", o.overrides, "dotted-key override, e.g. trap.x_eq=\"10 um\"")->take_all();
        sub->add_flag("--convergence-check", o.convergence_check, "re-run with half the step and report the change");
        sub->add_option("--threads", o.threads, "worker threads for ensemble evolution")->check(CLI::PositiveNumber);
        if (writes) {
            sub->add_option("--out", o.out, "output directory")->capture_default_str();
        }
    };
    struct Command {
        const char *name;
        const char *help;
        bool writes;
    };
    const Command commands[] = {
        {"params", "print derived quantities as JSON", false},
        {"validate", "check invariants and validity ratios without running dynamics", false},
        {"heating", "thermal heating under the two-sideband drive", true},
        {"ms-gate", "two-qubit gate populations and Bell fidelity", true},
        {"spam", "state preparation and measurement protocol", true},
        {"ultrafast-design", "design a kick sequence", true},
        {"ultrafast-sim", "simulate a kick sequence and report its phase", true},
    };
    for (const auto &c : commands) {
        auto *sub = app.add_subcommand(c.name, c.help);
        add_common(sub, c.writes);
        if (std::string(c.name) == "ultrafast-sim") {
            sub->add_option("--sequence", o.sequence, "sequence JSON from ultrafast-design (designed afresh if omitted)");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion &) {
        out << kVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "validate") {
            ExperimentConfig cfg;
            try {
                cfg = resolve_config(o);
            } catch (const ConfigError &e) {
                out << format_validation({{CheckStatus::fail, "type invariants", "violated", e.what()}});
                err << "config error: " << e.what() << "\n";
                return kExitConfig;
            }
            const auto rows = validation_report(cfg);
            out << format_validation(rows);
            const bool failed = std::any_of(rows.begin(), rows.end(), [](const auto &r) { return r.status == CheckStatus::fail; });
            return failed ? kExitConfig : kExitOk;
        }
        const auto cfg = resolve_config(o);
        const fs::path dir(o.out);
        if (cmd == "params") {
            return cmd_params(cfg, out);
        }
        if (cmd == "heating") {
            return cmd_heating(cfg, dir, out);
        }
        if (cmd == "ms-gate") {
            return cmd_ms(cfg, dir, out);
        }
        if (cmd == "spam") {
            return cmd_spam(cfg, dir, out);
        }
        if (cmd == "ultrafast-design") {
            return cmd_design(cfg, dir, out);
        }
        return cmd_ultrafast_sim(cfg, o, dir, out);
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalGuardError &e) {
        err << "numerical guard: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    std::vector<const char *> argv{"eggsim"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace eggsim
