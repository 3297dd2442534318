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

#pragma once

#include <stdexcept>
#include <string>

namespace eggsim {

/// Invalid or inconsistent configuration. Raised before any dynamics run.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A numerical guard tripped during a computation (truncation, norm drift,
/// solver failure, non-separating detector threshold).
struct NumericalGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationError : NumericalGuardError {
    using NumericalGuardError::NumericalGuardError;
};

struct NormDriftError : NumericalGuardError {
    using NumericalGuardError::NumericalGuardError;
};

struct AmbiguousThresholdError : NumericalGuardError {
    AmbiguousThresholdError(const std::string &msg, double dark_mean, double bright_mean)
        : NumericalGuardError(msg), dark_mean(dark_mean), bright_mean(bright_mean) {
    }
    double dark_mean;
    double bright_mean;
};

struct DesignFailure : NumericalGuardError {
    using NumericalGuardError::NumericalGuardError;
};

}  // namespace eggsim
