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

// Kick-based two-qubit phase gates. Two molecules share a COM mode (index 0)
// and a relative mode (index 1). A resonant gradient pulse of duration
// t_pulse acts as an instantaneous spin-dependent momentum kick in the X
// basis; free evolution between kicks rotates phase space at omega_p.
//
// Sign conventions used throughout:
//   * X-basis labels s = +1 for |+X> = (|g> + |e>)/sqrt2, s = -1 for |-X>.
//   * Branch (s1, s2) displaces mode p by D_p(-i c_p z_j dp_p) with
//     c_COM = s1 + s2 and c_rel = s1 - s2.
//   * The gate is exp(+i Phi X1 X2) times free rotation, so |+X+X> picks up
//     e^{+i Phi} relative to the mean and |+X-X> picks up e^{-i Phi}.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"

#include "eggsim/config.h"
#include "eggsim/fock.h"

namespace eggsim {

struct Pulse {
    double time = 0.0;  // T_j in seconds
    double z = 0.0;     // signed multiple of the base kick
};

struct PulseSequence {
    std::vector<Pulse> pulses;
    double dp_base = 0.0;                    // dimensionless momentum kick of the COM mode for z = 1
    std::array<double, 2> mode_freqs{};      // COM, relative (rad/s)
    std::array<double, 2> kick_ratio{1, 1};  // dp_p / dp_base, i.e. eta_p / eta_COM
    double t_pulse = 1e-8;

    double kick(std::size_t mode, std::size_t pulse) const { return pulses[pulse].z * dp_base * kick_ratio[mode]; }
    double total_time() const { return pulses.empty() ? 0.0 : pulses.back().time; }
    /// Throws ConfigError unless times start at 0 and strictly increase and
    /// the mode data is physical.
    void validate() const;
};

/// Mode frequencies and kick ratios for the configured two-ion crystal.
PulseSequence empty_sequence(const ExperimentConfig &cfg);

PulseSequence make_sequence(const ExperimentConfig &cfg, const std::vector<double> &times, const std::vector<double> &z);

nlohmann::json to_json(const PulseSequence &seq);
PulseSequence sequence_from_json(const nlohmann::json &j);

/// The four-projector kick. `space` must hold two two-level molecules and
/// two modes (COM first).
Operator kick_propagator(const HilbertSpace &space, double dp1, double dp2, double guard_factor = 0.5);
/// kick_propagator applied to a state without forming the operator: each
/// X-basis branch block is displaced as a dense d0 x d1 matrix.
StateVector apply_kick(const StateVector &psi, double dp1, double dp2, double guard_factor = 0.5);
Operator free_propagator(const HilbertSpace &space, double t, const std::array<double, 2> &mode_freqs);

/// |sum_j dp_{p,j} e^{i omega_p T_j}| per mode.
std::array<double, 2> closure_residual(const PulseSequence &seq);

/// Geometric phase of each displaced branch: phi_p for the branch where
/// mode p is driven with |c_p| = 2. Valid for any mode model.
std::array<double, 2> branch_phases(const PulseSequence &seq);

/// Phi for the two-ion model (relative frequency omega_COM / sqrt3, kick
/// ratio 3^(1/4)). Throws ConfigError for any other mode model.
double accumulated_phase(const PulseSequence &seq);

/// Applies prod_j U_o(t_l) U_p(j) to psi, ending at the last pulse.
StateVector apply_sequence(const PulseSequence &seq, const StateVector &psi, double guard_factor = 0.5);
/// The same with every z_j set to zero: free rotation for the total time.
StateVector apply_reference(const PulseSequence &seq, const StateVector &psi);

struct PhaseExtraction {
    double phase = 0.0;                 // (arg A_{++} - arg A_{+-}) / 2
    std::array<cd, 4> amplitudes{};     // branches ++, +-, -+, -- against the reference
};

/// Extracts the two-qubit phase from the operator product for a given
/// motional state (one local vector per mode).
PhaseExtraction extract_phase(const PulseSequence &seq, const std::vector<CVec> &motion, double guard_factor = 0.5);

/// Largest |alpha| the sequence reaches in each mode over all branches.
std::array<double, 2> max_excursion(const PulseSequence &seq);

struct PhasePoint {
    double t = 0.0;
    double x = 0.0;  // <x> / x0
    double p = 0.0;  // <p> / p0
};

struct Trajectory {
    int s1 = 1;
    int s2 = 1;
    std::array<std::vector<PhasePoint>, 2> modes;  // lab-frame polylines

    /// Distance between first and last point of a mode's path.
    double endpoint_error(std::size_t mode) const;
    /// Largest distance from the origin reached by a mode.
    double max_radius(std::size_t mode) const;
};

Trajectory trajectory(const PulseSequence &seq, int s1, int s2, int points_per_period = 96);

/// Vertices of a branch's path in the frame co-rotating with the mode, in
/// (x/x0, p/p0) units, starting at the origin and including every kick.
std::vector<PhasePoint> rotating_frame_path(const PulseSequence &seq, int s1, int s2, std::size_t mode);

/// Signed shoelace area of a polygon (closed implicitly).
double polygon_area(const std::vector<PhasePoint> &path);

/// Rabi frequency of a finite pulse of width t_pulse that produces the
/// base kick in the gradient Hamiltonian.
double pulse_rabi(const PulseSequence &seq, const ExperimentConfig &cfg);

/// Evolves `psi` (interaction frame, two molecules, two modes) through the
/// sequence with every kick replaced by a finite resonant gradient pulse
/// centred on T_j, with the configured x_eq.
StateVector finite_pulse_sequence(
    const PulseSequence &seq, const ExperimentConfig &cfg, const StateVector &psi, double x_eq);

struct XeqReport {
    double x_eq = 0.0;
    double phase_reference = 0.0;  // numeric Phi at x_eq = 0
    double phase_offset = 0.0;     // numeric Phi at x_eq
    double deviation = 0.0;        // |phase_offset - phase_reference|
    double formula_phase = 0.0;    // accumulated_phase(seq)
    double min_return = 1.0;       // smallest |<branch, 0,0|psi>|^2
};

XeqReport xeq_robustness_check(const PulseSequence &seq, const ExperimentConfig &cfg, double x_eq);

/// Overlap |<kick|finite>|^2 for one pulse of kick z acting on
/// |g g> (x) |0, 0>.
double impulse_overlap(const PulseSequence &seq, const ExperimentConfig &cfg, double z);

}  // namespace eggsim
