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

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eggsim/config.h"
#include "eggsim/fock.h"

namespace eggsim {

/// Scalar time dependence of one Hamiltonian term, stored as a short sum of
/// phasors c_k exp(i w_k t). The named constructors cover the closed set
/// used by the builders.
class Envelope {
   public:
    struct Phasor {
        cd amplitude;
        double frequency;
    };

    Envelope() = default;
    static Envelope constant(cd c);
    /// c cos(w t + phi)
    static Envelope cosine(double c, double w, double phi = 0.0);
    /// c exp(i w t)
    static Envelope exponential(cd c, double w);

    cd operator()(double t) const;
    const std::vector<Phasor> &phasors() const { return phasors_; }
    /// Upper bound on |f(t)|.
    double max_magnitude() const;
    Envelope conj() const;
    Envelope &operator+=(const Envelope &other);

   private:
    std::vector<Phasor> phasors_;
};

/// Interaction picture a term lives in. `full` rotates motion and spin;
/// `spin` rotates only the internal levels (free motion kept explicitly).
enum class Frame { full, spin };

struct HamiltonianTerm {
    std::string label;  // e.g. "a s+ [1]"; identical labels merge envelopes
    Operator op;
    Envelope envelope;
    /// For terms acting only on the internal levels: the same operator as a
    /// dense matrix on the internal subspace (all molecules, motion dropped).
    std::optional<CMat> internal;
};

/// H(t) = sum_k f_k(t) O_k in units of hbar (rad/s).
class Hamiltonian {
   public:
    explicit Hamiltonian(HilbertSpace space, Frame frame = Frame::full);

    const HilbertSpace &space() const { return space_; }
    Frame frame() const { return frame_; }
    const std::vector<HamiltonianTerm> &terms() const { return terms_; }

    /// Adds f(t) O; merges into an existing term with the same label.
    void add(const std::string &label, const Operator &op, const Envelope &f, std::optional<CMat> internal = std::nullopt);
    /// Adds f(t) O + conj(f(t)) O^dagger.
    void add_hermitian_pair(
        const std::string &label, const Operator &op, const Envelope &f, std::optional<CMat> internal = std::nullopt);
    void append(const Hamiltonian &other);

    SpMat matrix(double t) const;
    /// max |H - H^dag| / max |H| at time t (0 for an all-zero H).
    double hermiticity_defect(double t) const;
    /// Only the phasors with zero frequency: the time-independent part left
    /// after dropping every oscillating term.
    Hamiltonian secular_part(double tolerance = 0.0) const;
    /// Largest |w| among all phasors.
    double fastest_frequency() const;
    /// Bound on the operator norm of H(t) over all t.
    double norm_bound() const;

   private:
    HilbertSpace space_;
    Frame frame_;
    std::vector<HamiltonianTerm> terms_;
};

/// `local` on one molecule, identity on the other molecules, as a dense
/// matrix on the internal subspace.
CMat internal_embed(const HilbertSpace &space, std::size_t molecule, const CMat &local);

/// Resonant-dipole drive (Omega/2)(s+ exp(i(delta t - phi)) + h.c.) on one
/// molecule, or on all of them when `molecule` is empty.
Hamiltonian build_E1(
    const HilbertSpace &space, double rabi, double detuning, double phase,
    std::optional<std::size_t> molecule = std::nullopt);

/// Gradient (quadrupole) drive from one or more tones. `modes` must list one
/// ModeSpec per mode factor of `space`, in order; every molecule shares the
/// splitting and offset of `mol` / `trap`. Per tone k with Omega_k and
/// delta_k = splitting - omega_k, ion i:
///   2 Omega_k sum_p eta_p^(i) (a_p e^{-i w_p t} + h.c.)(s+ e^{i(delta_k t - phi_k)} + h.c.)
///   + 2 Omega_k (x_eq / r_o)(s+ e^{i(delta_k t - phi_k)} + h.c.).
/// In the spin frame the motional phases are dropped and sum_p w_p a_p^dag a_p
/// is added. Throws ConfigError for a dipole-geometry tone.
Hamiltonian build_E2(
    const HilbertSpace &space,
    const std::vector<DriveTone> &tones,
    const std::vector<ModeSpec> &modes,
    const MoleculeConfig &mol,
    const TrapConfig &trap,
    Frame frame = Frame::full);

/// (4 Omega x_eq / r_o)(X1 + X2) cos((w_q + gamma) t) on a two-molecule space.
Hamiltonian build_carrier_error(
    const HilbertSpace &space, double rabi, double x_eq, double field_radius, double mode_frequency,
    double detuning);

/// Time-independent effective bichromatic coupling 2 Omega eta (a + a^dag) X
/// summed over molecules, for mode `mode` with per-molecule couplings `etas`.
Hamiltonian build_bichromatic_effective(
    const HilbertSpace &space, double rabi, const std::vector<double> &etas, std::size_t mode = 0);

}  // namespace eggsim
