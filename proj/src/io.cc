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

#include "eggsim/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace eggsim {

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    if (x == 0) {
        return "0";  // folds -0
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double> &row) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (double v : row) {
        cells.push_back(format_number(v));
    }
    add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string> &row) {
    if (row.size() != header_.size()) {
        throw std::invalid_argument(
            "CSV row has " + std::to_string(row.size()) + " cells, header has " + std::to_string(header_.size()));
    }
    rows_.push_back(row);
}

std::string CsvTable::str() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            os << (i ? "," : "") << cells[i];
        }
        os << '\n';
    };
    line(header_);
    for (const auto &r : rows_) {
        line(r);
    }
    return os.str();
}

std::string json_text(const nlohmann::json &j) { return j.dump(2) + "\n"; }

void write_text_atomic(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        f << text;
        f.flush();
        if (!f) {
            throw std::runtime_error("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

namespace {

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-300 ? 0.0 : v);
    return buf;
}

double nice_step(double span) {
    if (!(span > 0)) {
        return 1.0;
    }
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            return m * mag;
        }
    }
    return 10.0 * mag;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range padded(double lo, double hi) {
    if (!(hi > lo)) {
        const double c = std::isfinite(lo) ? lo : 0.0;
        const double w = std::max(1.0, std::abs(c) * 0.1);
        return {c - w, c + w};
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

}  // namespace

std::string svg_plot(const PlotSpec &spec) {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto &s : spec.series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    }
    Range xr = padded(xmin, xmax);
    Range yr = padded(ymin, ymax);
    const double left = 70, right = 150, top = 40, bottom = 55;
    const double pw = spec.width - left - right;
    const double ph = spec.height - top - bottom;
    if (spec.equal_aspect) {
        const double sx = (xr.hi - xr.lo) / pw;
        const double sy = (yr.hi - yr.lo) / ph;
        const double s = std::max(sx, sy);
        const double cx = 0.5 * (xr.lo + xr.hi);
        const double cy = 0.5 * (yr.lo + yr.hi);
        xr = {cx - 0.5 * s * pw, cx + 0.5 * s * pw};
        yr = {cy - 0.5 * s * ph, cy + 0.5 * s * ph};
    }
    auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<!-- eggsim " << kVersion << " -->\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(spec.title) << "</text>\n";
    os << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(pw) << "\" height=\""
       << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xs = nice_step(xr.hi - xr.lo);
    for (double v = std::ceil(xr.lo / xs) * xs; v <= xr.hi + 1e-9 * xs; v += xs) {
        os << "<line x1=\"" << fixed(px(v)) << "\" y1=\"" << fixed(top + ph) << "\" x2=\"" << fixed(px(v)) << "\" y2=\""
           << fixed(top + ph + 5) << "\" stroke=\"black\"/>";
        os << "<text x=\"" << fixed(px(v)) << "\" y=\"" << fixed(top + ph + 18) << "\" text-anchor=\"middle\">"
           << tick_label(v) << "</text>\n";
    }
    const double ys = nice_step(yr.hi - yr.lo);
    for (double v = std::ceil(yr.lo / ys) * ys; v <= yr.hi + 1e-9 * ys; v += ys) {
        os << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(py(v)) << "\" x2=\"" << fixed(left) << "\" y2=\""
           << fixed(py(v)) << "\" stroke=\"black\"/>";
        os << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(py(v) + 4) << "\" text-anchor=\"end\">"
           << tick_label(v) << "</text>\n";
    }
    os << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(spec.height - 12.0)
       << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
    os << "<text transform=\"translate(16," << fixed(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(spec.y_label) << "</text>\n";

    for (std::size_t k = 0; k < spec.series.size(); ++k) {
        const auto &s = spec.series[k];
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.line && n > 1) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
               << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
            for (std::size_t i = 0; i < n; ++i) {
                os << (i ? " " : "") << fixed(px(s.x[i])) << "," << fixed(py(s.y[i]));
            }
            os << "\"/>\n";
        }
        if (s.markers) {
            for (std::size_t i = 0; i < n; ++i) {
                os << "<circle cx=\"" << fixed(px(s.x[i])) << "\" cy=\"" << fixed(py(s.y[i])) << "\" r=\"2.5\" fill=\""
                   << s.color << "\"/>";
            }
            os << "\n";
        }
        const double ly = top + 14.0 + 18.0 * static_cast<double>(k);
        const double lx = left + pw + 12;
        os << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(lx + 22) << "\" y2=\""
           << fixed(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
           << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>";
        os << "<text x=\"" << fixed(lx + 28) << "\" y=\"" << fixed(ly + 4) << "\">" << escape(s.name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace eggsim
