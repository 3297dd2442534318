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
#include <functional>
#include <optional>
#include <vector>

#include "eggsim/config.h"
#include "eggsim/fock.h"
#include "eggsim/hamiltonian.h"

namespace eggsim {

/// Fixed-step policy for the RK4 integrator. The step is the smaller of
/// (2 pi / w_fast) / steps_per_period and max_phase_per_step / ||H||, then
/// shrunk so that every sample interval holds a whole number of steps.
///
/// When the internal-only terms (carrier couplings) dominate the norm by
/// more than frame_ratio, they are integrated separately on the internal
/// subspace and the state is evolved in their frame. ||H|| then counts only
/// the remaining terms, and w_fast includes the frame's rotation rate.
struct StepPolicy {
    double steps_per_period = 40.0;
    double max_phase_per_step = 0.02;
    double max_dt = 0.0;  // optional hard cap; 0 disables
    bool internal_frame = true;
    double frame_ratio = 4.0;

    static StepPolicy from(const NumericsConfig &numerics);
    StepPolicy halved() const;
    /// Largest step allowed for H in the plain (lab) frame.
    double step_bound(const Hamiltonian &h) const;
};

struct EvolveOptions {
    StepPolicy step;
    double t_start = 0.0;
    std::vector<double> sample_times;  // ascending, >= t_start
    double norm_tolerance = 1e-6;
    bool throw_on_norm_drift = true;
    double truncation_tolerance = 1e-6;  // on the top two Fock levels of every mode
    bool check_truncation = true;
    bool convergence_check = false;
    int threads = 1;

    /// `samples` evenly spaced times from t_start to t_end inclusive.
    static EvolveOptions uniform(double t_end, int samples, double t_start = 0.0);
};

/// Sampled observables of one evolution or a weighted ensemble of them.
struct EvolutionResult {
    std::vector<double> times;
    std::vector<std::vector<double>> mean_n;  // [sample][mode]
    std::vector<CMat> internal_density;       // [sample], motion traced out
    std::vector<double> norm_drift;           // [sample], worst member
    std::vector<std::size_t> internal_levels;  // levels per molecule
    std::vector<StateVector> final_states;     // one per member
    std::vector<double> weights;
    double dt = 0.0;  // largest step used
    std::size_t steps = 0;  // per member
    double max_norm_drift = 0.0;
    bool norm_flagged = false;
    double max_top_population = 0.0;
    /// Largest change of any observable when the step is halved (only in
    /// convergence-check mode). Phonon numbers enter as |dn| / (1 + n).
    std::optional<double> convergence_delta;

    std::size_t samples() const { return times.size(); }
    /// Population of the internal basis state with the given per-molecule levels.
    double population(std::size_t sample, const std::vector<std::size_t> &levels) const;
    /// <sigma_X> of one molecule on the (g, e) pair.
    double sigma_x(std::size_t sample, std::size_t molecule) const;
    std::vector<double> mean_n_trace(std::size_t mode = 0) const;
    std::vector<double> population_trace(const std::vector<std::size_t> &levels) const;
};

/// Solves i d/dt psi = H(t) psi with fixed-step RK4 and samples observables.
/// Throws NormDriftError / TruncationError when the guards trip.
EvolutionResult evolve(const Hamiltonian &h, const StateVector &psi0, const EvolveOptions &options);

using HamiltonianFactory = std::function<Hamiltonian(const HilbertSpace &)>;

/// Evolves every member (each with the Hamiltonian built for its own space)
/// and reduces the observables as a weighted sum in member order.
EvolutionResult evolve_ensemble(const HamiltonianFactory &factory, const MixedEnsemble &ensemble, const EvolveOptions &options);
EvolutionResult evolve_ensemble(const Hamiltonian &h, const MixedEnsemble &ensemble, const EvolveOptions &options);

/// Bare propagation from t0 to t1 without sampling or guards.
StateVector propagate(const Hamiltonian &h, const StateVector &psi0, double t0, double t1, const StepPolicy &step);

}  // namespace eggsim
