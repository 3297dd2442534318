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

#include "eggsim/config.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "eggsim/derived.h"
#include "eggsim/errors.h"

namespace eggsim {

using nlohmann::json;
using namespace constants;

void MoleculeConfig::validate(const std::vector<double> &mode_frequencies) const {
    if (!(dipole_moment > 0)) {
        throw ConfigError("molecule.dipole_moment must be positive");
    }
    if (!(mass > 0)) {
        throw ConfigError("molecule.mass must be positive");
    }
    if (!(splitting > 0)) {
        throw ConfigError("molecule.splitting must be positive");
    }
    for (double w : mode_frequencies) {
        if (splitting / w <= 100.0) {
            throw ConfigError(
                "molecule.splitting / mode frequency = " + std::to_string(splitting / w) + " must exceed 100");
        }
    }
}

void TrapConfig::validate() const {
    if (!(field_radius > 0)) {
        throw ConfigError("trap.field_radius must be positive");
    }
    if (!(secular_frequency > 0)) {
        throw ConfigError("trap.secular_frequency must be positive");
    }
    if (!(std::abs(x_eq) < 0.1 * field_radius)) {
        throw ConfigError("trap.x_eq must satisfy |x_eq| < 0.1 r_o");
    }
    if (n_ions < 1) {
        throw ConfigError("trap.n_ions must be at least 1");
    }
}

void ModeSpec::validate() const {
    if (!(frequency > 0)) {
        throw ConfigError("mode frequency must be positive");
    }
    double norm = 0;
    for (double b : participation) {
        norm += b * b;
    }
    if (std::abs(norm - 1.0) > 1e-9) {
        throw ConfigError("mode participation vector must have unit norm");
    }
}

void DriveTone::validate() const {
    if (!(amplitude >= 0)) {
        throw ConfigError("drive amplitude V_m must be non-negative");
    }
}

std::vector<ModeSpec> ExperimentConfig::resolved_modes() const {
    if (modes) {
        return *modes;
    }
    auto [com, rel] = two_ion_modes(trap);
    return {com, rel};
}

void ExperimentConfig::validate() const {
    trap.validate();
    auto ms_modes = resolved_modes();
    std::vector<double> freqs;
    for (const auto &m : ms_modes) {
        m.validate();
        if (m.participation.size() != static_cast<std::size_t>(trap.n_ions)) {
            throw ConfigError("mode participation length must equal trap.n_ions");
        }
        freqs.push_back(m.frequency);
    }
    for (std::size_t p = 0; p < ms_modes.size(); ++p) {
        for (std::size_t q = p + 1; q < ms_modes.size(); ++q) {
            double dot = 0;
            for (std::size_t i = 0; i < ms_modes[p].participation.size(); ++i) {
                dot += ms_modes[p].participation[i] * ms_modes[q].participation[i];
            }
            if (std::abs(dot) > 1e-9) {
                throw ConfigError("mode participation vectors must be orthogonal");
            }
        }
    }
    molecule.validate(freqs);
    if (!(drive_amplitude >= 0)) {
        throw ConfigError("drive.amplitude must be non-negative");
    }
    if (!(gate.detuning > 0)) {
        throw ConfigError("gate.detuning must be positive");
    }
    if (gate.target_mode < 0 || static_cast<std::size_t>(gate.target_mode) >= ms_modes.size()) {
        throw ConfigError("gate.target_mode out of range");
    }
    if (!(gate.temperature >= 0) || !(heating.temperature >= 0) || !(spam.temperature >= 0)) {
        throw ConfigError("temperatures must be non-negative");
    }
    if (!(heating.t_end >= 0) || heating.samples < 1) {
        throw ConfigError("heating.t_end must be >= 0 and heating.samples >= 1");
    }
    if (!(heating.mismatch >= 0 && heating.mismatch < 1)) {
        throw ConfigError("heating.mismatch must lie in [0, 1)");
    }
    if (!(heating.participation > 0 && heating.participation <= 1)) {
        throw ConfigError("heating.participation must lie in (0, 1]");
    }
    for (double eps : {heating.thermal_epsilon, ms.thermal_epsilon, spam.thermal_epsilon}) {
        if (!(eps > 0 && eps < 1)) {
            throw ConfigError("thermal_epsilon must lie in (0, 1)");
        }
    }
    if (!(ms.theta_end >= 0) || ms.samples < 1 || !(ms.time_scale > 0) || !(ms.tone_fraction > 0)) {
        throw ConfigError("ms.theta_end >= 0, ms.samples >= 1, ms.time_scale > 0 and ms.tone_fraction > 0 required");
    }
    for (int n : ms.fock_states) {
        if (n < 0) {
            throw ConfigError("ms.fock_states entries must be non-negative");
        }
    }
    if (spam.input != "g" && spam.input != "e" && spam.input != "plus") {
        throw ConfigError("spam.input must be one of g, e, plus");
    }
    if (!(spam.drive_time >= 0) || !(spam.threshold >= 0) || !(spam.participation > 0 && spam.participation <= 1)) {
        throw ConfigError("spam.drive_time >= 0, spam.threshold >= 0 and spam.participation in (0, 1] required");
    }
    if (ultrafast.n_pulses < 4) {
        throw ConfigError("ultrafast.n_pulses must be at least 4");
    }
    if (!(ultrafast.dp_base > 0) || !(ultrafast.min_gap >= 0) || !(ultrafast.max_total_time >= 0) ||
        ultrafast.starts < 1 || !(ultrafast.t_pulse > 0)) {
        throw ConfigError("ultrafast.dp_base > 0, min_gap >= 0, max_total_time >= 0, starts >= 1, t_pulse > 0 required");
    }
    if (!(numerics.guard_factor > 0) || !(numerics.steps_per_period > 0) || !(numerics.max_phase_per_step > 0) ||
        numerics.threads < 1) {
        throw ConfigError("numerics parameters must be positive");
    }
}

// ---------------------------------------------------------------------------
// Units

namespace {

const std::map<std::string, double> &unit_table(Dimension dim) {
    static const std::map<Dimension, std::map<std::string, double>> tables = {
        {Dimension::angular_frequency,
         {{"rad/s", 1.0}, {"Hz", two_pi}, {"kHz", two_pi * 1e3}, {"MHz", two_pi * 1e6}, {"GHz", two_pi * 1e9}}},
        {Dimension::length, {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"µm", 1e-6}, {"nm", 1e-9}}},
        {Dimension::time, {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"µs", 1e-6}, {"ns", 1e-9}}},
        {Dimension::voltage, {{"V", 1.0}, {"mV", 1e-3}, {"kV", 1e3}}},
        {Dimension::temperature, {{"K", 1.0}, {"mK", 1e-3}, {"uK", 1e-6}, {"µK", 1e-6}}},
        {Dimension::dipole, {{"C m", 1.0}, {"Cm", 1.0}, {"D", debye}}},
        {Dimension::mass, {{"kg", 1.0}, {"amu", atomic_mass_unit}, {"u", atomic_mass_unit}}},
        {Dimension::angle, {{"rad", 1.0}, {"deg", pi / 180.0}, {"pi", pi}}},
        {Dimension::dimensionless, {}},
    };
    return tables.at(dim);
}

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

double parse_quantity(const json &value, Dimension dim) {
    if (value.is_number()) {
        return value.get<double>();
    }
    if (!value.is_string()) {
        throw ConfigError("expected a number or a quantity string, got " + value.dump());
    }
    auto text = value.get<std::string>();
    const char *begin = text.c_str();
    char *end = nullptr;
    double number = std::strtod(begin, &end);
    if (end == begin) {
        throw ConfigError("cannot parse quantity '" + text + "'");
    }
    auto unit = trim(std::string(end));
    if (unit.empty()) {
        return number;
    }
    const auto &table = unit_table(dim);
    auto it = table.find(unit);
    if (it == table.end()) {
        throw ConfigError("unknown unit '" + unit + "' in '" + text + "'");
    }
    return number * it->second;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

/// Reads keys out of one JSON object and rejects keys nobody asked for.
class Section {
   public:
    Section(const json &doc, std::string name) : name_(std::move(name)) {
        if (doc.contains(name_)) {
            obj_ = doc.at(name_);
            if (!obj_.is_object()) {
                throw ConfigError("section '" + name_ + "' must be an object");
            }
        } else {
            obj_ = json::object();
        }
    }

    void quantity(const char *key, double &out, Dimension dim) {
        seen_.insert(key);
        if (obj_.contains(key)) {
            try {
                out = parse_quantity(obj_.at(key), dim);
            } catch (const ConfigError &e) {
                throw ConfigError(name_ + "." + key + ": " + e.what());
            }
        }
    }

    template <typename T>
    void plain(const char *key, T &out) {
        seen_.insert(key);
        if (obj_.contains(key)) {
            try {
                out = obj_.at(key).get<T>();
            } catch (const json::exception &e) {
                throw ConfigError(name_ + "." + key + ": " + e.what());
            }
        }
    }

    void finish() const {
        for (const auto &[k, v] : obj_.items()) {
            if (!seen_.count(k)) {
                throw ConfigError("unknown key '" + name_ + "." + k + "'");
            }
        }
    }

   private:
    std::string name_;
    json obj_;
    std::set<std::string> seen_;
};

}  // namespace

ExperimentConfig config_from_json(const json &doc) {
    if (!doc.is_object()) {
        throw ConfigError("config document must be a JSON object");
    }
    static const std::set<std::string> sections = {"molecule", "trap",  "drive",     "gate",    "modes",
                                                   "heating",  "ms",    "spam",      "ultrafast", "numerics"};
    for (const auto &[k, v] : doc.items()) {
        if (!sections.count(k)) {
            throw ConfigError("unknown section '" + k + "'");
        }
    }

    ExperimentConfig cfg;
    {
        Section s(doc, "molecule");
        s.quantity("dipole_moment", cfg.molecule.dipole_moment, Dimension::dipole);
        s.quantity("mass", cfg.molecule.mass, Dimension::mass);
        s.quantity("splitting", cfg.molecule.splitting, Dimension::angular_frequency);
        s.plain("has_aux", cfg.molecule.has_aux);
        s.finish();
    }
    {
        Section s(doc, "trap");
        s.quantity("field_radius", cfg.trap.field_radius, Dimension::length);
        s.quantity("secular_frequency", cfg.trap.secular_frequency, Dimension::angular_frequency);
        s.quantity("x_eq", cfg.trap.x_eq, Dimension::length);
        s.plain("n_ions", cfg.trap.n_ions);
        s.finish();
    }
    {
        Section s(doc, "drive");
        s.quantity("amplitude", cfg.drive_amplitude, Dimension::voltage);
        s.quantity("phase", cfg.drive_phase, Dimension::angle);
        s.finish();
    }
    {
        Section s(doc, "gate");
        s.quantity("detuning", cfg.gate.detuning, Dimension::angular_frequency);
        s.plain("target_mode", cfg.gate.target_mode);
        s.quantity("temperature", cfg.gate.temperature, Dimension::temperature);
        s.finish();
    }
    if (doc.contains("modes") && !doc.at("modes").is_null()) {
        const auto &arr = doc.at("modes");
        if (!arr.is_array()) {
            throw ConfigError("'modes' must be an array");
        }
        std::vector<ModeSpec> modes;
        for (const auto &m : arr) {
            ModeSpec spec;
            if (!m.contains("frequency") || !m.contains("participation")) {
                throw ConfigError("each mode needs 'frequency' and 'participation'");
            }
            spec.frequency = parse_quantity(m.at("frequency"), Dimension::angular_frequency);
            spec.participation = m.at("participation").get<std::vector<double>>();
            modes.push_back(std::move(spec));
        }
        cfg.modes = std::move(modes);
    }
    {
        Section s(doc, "heating");
        s.quantity("temperature", cfg.heating.temperature, Dimension::temperature);
        s.quantity("t_end", cfg.heating.t_end, Dimension::time);
        s.plain("samples", cfg.heating.samples);
        s.plain("mismatch", cfg.heating.mismatch);
        s.plain("participation", cfg.heating.participation);
        s.plain("thermal_epsilon", cfg.heating.thermal_epsilon);
        s.finish();
    }
    {
        Section s(doc, "ms");
        s.quantity("theta_end", cfg.ms.theta_end, Dimension::angle);
        s.plain("samples", cfg.ms.samples);
        s.plain("time_scale", cfg.ms.time_scale);
        s.plain("thermal_epsilon", cfg.ms.thermal_epsilon);
        s.plain("calibrate", cfg.ms.calibrate);
        s.plain("include_spectator_mode", cfg.ms.include_spectator_mode);
        s.plain("fock_states", cfg.ms.fock_states);
        s.plain("tone_fraction", cfg.ms.tone_fraction);
        s.finish();
    }
    {
        Section s(doc, "spam");
        s.quantity("temperature", cfg.spam.temperature, Dimension::temperature);
        s.quantity("drive_time", cfg.spam.drive_time, Dimension::time);
        s.plain("threshold", cfg.spam.threshold);
        s.plain("participation", cfg.spam.participation);
        s.plain("input", cfg.spam.input);
        s.plain("seed", cfg.spam.seed);
        s.plain("thermal_epsilon", cfg.spam.thermal_epsilon);
        s.finish();
    }
    {
        Section s(doc, "ultrafast");
        s.plain("n_pulses", cfg.ultrafast.n_pulses);
        s.plain("dp_base", cfg.ultrafast.dp_base);
        s.quantity("max_total_time", cfg.ultrafast.max_total_time, Dimension::time);
        s.plain("min_gap", cfg.ultrafast.min_gap);
        s.plain("balanced", cfg.ultrafast.balanced);
        s.quantity("x_eq_check", cfg.ultrafast.x_eq_check, Dimension::length);
        s.plain("seed", cfg.ultrafast.seed);
        s.plain("starts", cfg.ultrafast.starts);
        s.quantity("t_pulse", cfg.ultrafast.t_pulse, Dimension::time);
        s.finish();
    }
    {
        Section s(doc, "numerics");
        s.plain("guard_factor", cfg.numerics.guard_factor);
        s.plain("steps_per_period", cfg.numerics.steps_per_period);
        s.plain("max_phase_per_step", cfg.numerics.max_phase_per_step);
        s.plain("internal_frame", cfg.numerics.internal_frame);
        s.plain("norm_tolerance", cfg.numerics.norm_tolerance);
        s.plain("truncation_tolerance", cfg.numerics.truncation_tolerance);
        s.plain("threads", cfg.numerics.threads);
        s.plain("convergence_check", cfg.numerics.convergence_check);
        s.finish();
    }
    cfg.validate();
    return cfg;
}

json config_to_json(const ExperimentConfig &cfg) {
    json doc;
    doc["molecule"] = {
        {"dipole_moment", cfg.molecule.dipole_moment},
        {"mass", cfg.molecule.mass},
        {"splitting", cfg.molecule.splitting},
        {"has_aux", cfg.molecule.has_aux}};
    doc["trap"] = {
        {"field_radius", cfg.trap.field_radius},
        {"secular_frequency", cfg.trap.secular_frequency},
        {"x_eq", cfg.trap.x_eq},
        {"n_ions", cfg.trap.n_ions}};
    doc["drive"] = {{"amplitude", cfg.drive_amplitude}, {"phase", cfg.drive_phase}};
    doc["gate"] = {
        {"detuning", cfg.gate.detuning}, {"target_mode", cfg.gate.target_mode}, {"temperature", cfg.gate.temperature}};
    if (cfg.modes) {
        json arr = json::array();
        for (const auto &m : *cfg.modes) {
            arr.push_back({{"frequency", m.frequency}, {"participation", m.participation}});
        }
        doc["modes"] = arr;
    }
    doc["heating"] = {
        {"temperature", cfg.heating.temperature},
        {"t_end", cfg.heating.t_end},
        {"samples", cfg.heating.samples},
        {"mismatch", cfg.heating.mismatch},
        {"participation", cfg.heating.participation},
        {"thermal_epsilon", cfg.heating.thermal_epsilon}};
    doc["ms"] = {
        {"theta_end", cfg.ms.theta_end},
        {"samples", cfg.ms.samples},
        {"time_scale", cfg.ms.time_scale},
        {"thermal_epsilon", cfg.ms.thermal_epsilon},
        {"calibrate", cfg.ms.calibrate},
        {"include_spectator_mode", cfg.ms.include_spectator_mode},
        {"fock_states", cfg.ms.fock_states},
        {"tone_fraction", cfg.ms.tone_fraction}};
    doc["spam"] = {
        {"temperature", cfg.spam.temperature},
        {"drive_time", cfg.spam.drive_time},
        {"threshold", cfg.spam.threshold},
        {"participation", cfg.spam.participation},
        {"input", cfg.spam.input},
        {"seed", cfg.spam.seed},
        {"thermal_epsilon", cfg.spam.thermal_epsilon}};
    doc["ultrafast"] = {
        {"n_pulses", cfg.ultrafast.n_pulses},
        {"dp_base", cfg.ultrafast.dp_base},
        {"max_total_time", cfg.ultrafast.max_total_time},
        {"min_gap", cfg.ultrafast.min_gap},
        {"balanced", cfg.ultrafast.balanced},
        {"x_eq_check", cfg.ultrafast.x_eq_check},
        {"seed", cfg.ultrafast.seed},
        {"starts", cfg.ultrafast.starts},
        {"t_pulse", cfg.ultrafast.t_pulse}};
    doc["numerics"] = {
        {"guard_factor", cfg.numerics.guard_factor},
        {"steps_per_period", cfg.numerics.steps_per_period},
        {"max_phase_per_step", cfg.numerics.max_phase_per_step},
        {"internal_frame", cfg.numerics.internal_frame},
        {"norm_tolerance", cfg.numerics.norm_tolerance},
        {"truncation_tolerance", cfg.numerics.truncation_tolerance},
        {"threads", cfg.numerics.threads},
        {"convergence_check", cfg.numerics.convergence_check}};
    return doc;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError("cannot parse '" + path + "': " + e.what());
    }
    return config_from_json(doc);
}

void apply_override(json &doc, const std::string &assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override must look like key=value, got '" + assignment + "'");
    }
    auto key = assignment.substr(0, eq);
    auto text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error &) {
        value = text;
    }
    json *node = &doc;
    std::stringstream ks(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ks, part, '.')) {
        if (part.empty()) {
            throw ConfigError("empty component in override key '" + key + "'");
        }
        parts.push_back(part);
    }
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->is_object()) {
            throw ConfigError("override key '" + key + "' walks through a non-object");
        }
        node = &(*node)[parts[i]];
        if (node->is_null()) {
            *node = json::object();
        }
    }
    if (!node->is_object()) {
        throw ConfigError("override key '" + key + "' walks through a non-object");
    }
    (*node)[parts.back()] = value;
}

}  // namespace eggsim
