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


// Command-line front end. `run_cli` is the whole program minus process
// plumbing, so tests can drive it with captured streams.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "eggsim/config.h"

namespace eggsim {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Every derived quantity the `params` command prints.
nlohmann::json derived_parameters(const ExperimentConfig &cfg);

enum class CheckStatus { pass, warn, fail };

struct ValidationRow {
    CheckStatus status = CheckStatus::pass;
    std::string check;
    std::string value;
    std::string detail;
};

/// Validity ratios and truncation estimates for a config that already
/// satisfies its type invariants. No dynamics are run.
std::vector<ValidationRow> validation_report(const ExperimentConfig &cfg);

std::string format_validation(const std::vector<ValidationRow> &rows);

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace eggsim
