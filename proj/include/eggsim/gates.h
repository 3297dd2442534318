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

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eggsim/fock.h"

namespace eggsim {

struct GateOutcome {
    std::optional<StateVector> state;
    CMat internal_density;
    double fidelity = 0.0;
    std::map<std::string, double> phases;
    double duration = 0.0;
};

/// State-dependent displacement produced by the effective bichromatic
/// drive on one molecule: |-X><-X| D(2i Omega eta t) + |+X><+X| D(-2i Omega eta t),
/// identity on the shelf level. Throws TruncationError if the guard fails.
Operator u_displacement(
    const HilbertSpace &space, double rabi, double eta_q, double t, std::size_t molecule = 0, std::size_t mode = 0,
    double guard_factor = 0.5);

/// exp(-i theta X1 X2) with theta = 2 Omega^2 eta1 eta2 t / gamma, identity on
/// motion. When gamma / (2 Omega max(eta)) < 10 a message is appended to
/// `warnings` (if given); the operator is still returned.
Operator u_ms(
    const HilbertSpace &space, double rabi, double eta1, double eta2, double detuning, double t,
    std::vector<std::string> *warnings = nullptr);
/// Same operator for a given angle.
Operator u_ms_angle(const HilbertSpace &space, double theta);

/// exp(-i theta/2 (cos phi X + sin phi Y)) on the (g, e) pair of a
/// `levels`-level molecule; the shelf level is left alone.
CMat rotation_matrix(std::size_t levels, double phi, double theta);
Operator single_qubit_rotation(const HilbertSpace &space, std::size_t molecule, double phi, double theta);

/// cos(theta)|g,g> - i sin(theta)|e,e> in an internal space with the given
/// per-molecule level counts.
CVec ms_target(const std::vector<std::size_t> &levels, double theta);

/// <target| rho |target> with rho the internal density matrix.
double bell_fidelity(const CMat &rho_internal, const std::vector<std::size_t> &levels, double theta);
double bell_fidelity(const StateVector &psi, double theta);
double bell_fidelity(const MixedEnsemble &ensemble, double theta);
double bell_fidelity(const StateVector &psi, double rabi, double eta1, double eta2, double detuning, double t);

}  // namespace eggsim
