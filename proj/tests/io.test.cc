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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

namespace eggsim {
namespace {

namespace fs = std::filesystem;

TEST(FormatNumber, ShortestRoundTrip) {
    for (double x : {0.1, 1.0 / 3.0, 6.283185307179586, 1e-300, -2.5e17, 9.93, 123456789.0}) {
        const auto s = format_number(x);
        EXPECT_EQ(std::strtod(s.c_str(), nullptr), x) << s;
    }
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(2.0), "2");
    EXPECT_EQ(format_number(1.0 / 0.0), "inf");
}

TEST(Csv, HeaderRowsAndDecimalPoint) {
    CsvTable t({"t_s", "mean_n"});
    t.add_row(std::vector<double>{0.0, 9.93});
    t.add_row(std::vector<double>{1e-4, 19.4});
    EXPECT_EQ(t.rows(), 2u);
    EXPECT_EQ(t.str(), "t_s,mean_n\n0,9.93\n1e-04,19.4\n");
    EXPECT_THROW(t.add_row(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Json, StableOrderingAndNewline) {
    nlohmann::json j = {{"b", 1}, {"a", {{"d", 2}, {"c", 3}}}};
    const auto text = json_text(j);
    EXPECT_EQ(text.back(), '\n');
    EXPECT_LT(text.find("\"a\""), text.find("\"b\""));
    EXPECT_LT(text.find("\"c\""), text.find("\"d\""));
    EXPECT_EQ(nlohmann::json::parse(text), j);
}

TEST(AtomicWrite, ReplacesFileAndLeavesNoTemporary) {
    const fs::path dir = fs::path(::testing::TempDir()) / "eggsim_io_test" / "nested";
    fs::remove_all(dir.parent_path());
    write_text_atomic(dir / "out.txt", "first\n");
    write_text_atomic(dir / "out.txt", "second\n");
    std::ifstream in(dir / "out.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "second\n");
    EXPECT_FALSE(fs::exists(dir / "out.txt.tmp"));
}

TEST(Svg, ContainsSeriesAxesAndIsDeterministic) {
    PlotSpec spec{"title <x>", "t", "n", {}};
    spec.series.push_back({"numeric", {0, 1, 2}, {1, 2, 5}, "#1f77b4", false, true, false});
    spec.series.push_back({"analytic", {0, 1, 2}, {1, 2, 5}, "#d62728", true, false, true});
    const auto a = svg_plot(spec);
    EXPECT_EQ(a, svg_plot(spec));
    EXPECT_NE(a.find("<svg"), std::string::npos);
    EXPECT_NE(a.find("<polyline"), std::string::npos);
    EXPECT_NE(a.find("<circle"), std::string::npos);
    EXPECT_NE(a.find("stroke-dasharray"), std::string::npos);
    EXPECT_NE(a.find("title &lt;x&gt;"), std::string::npos);
    EXPECT_NE(a.find(kVersion), std::string::npos);
    EXPECT_EQ(a.substr(a.size() - 7), "</svg>\n");
}

TEST(Svg, DegenerateDataStillRenders) {
    PlotSpec spec{"flat", "x", "y", {}};
    spec.equal_aspect = true;
    spec.series.push_back({"point", {1.0}, {1.0}});
    EXPECT_NE(svg_plot(spec).find("</svg>"), std::string::npos);
    PlotSpec empty{"empty", "x", "y", {}};
    EXPECT_NE(svg_plot(empty).find("</svg>"), std::string::npos);
}

}  // namespace
}  // namespace eggsim
