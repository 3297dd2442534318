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

// Output helpers. Every writer formats numbers the same way and writes via a
// temporary file plus rename, so results are byte-stable and never partial.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace eggsim {

inline constexpr const char *kVersion = "0.1.0";

/// Shortest decimal form that reads back as the same double; -0 prints as 0.
std::string format_number(double x);

/// Rows of cells; numbers go through format_number.
class CsvTable {
   public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(const std::vector<double> &row);
    void add_row(const std::vector<std::string> &row);
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

   private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Two-space indented JSON with sorted keys and a trailing newline.
std::string json_text(const nlohmann::json &j);

void write_text_atomic(const std::filesystem::path &path, const std::string &text);

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool line = true;
    bool markers = false;
    bool dashed = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    bool equal_aspect = false;
    int width = 640;
    int height = 440;
};

std::string svg_plot(const PlotSpec &spec);

}  // namespace eggsim
