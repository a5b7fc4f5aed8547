// Copyright 2026 The qspforge Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

// Microwave pulse compilation and Lindblad dephasing simulation.
//
// Basis: index 0 is |e⟩ = |1⟩, index 1 is |g⟩ = |0⟩. The QSP circuit's |0⟩
// is therefore index 1 here, and gates map across by conjugation with X.
// A resonant pulse of phase ϕ and Rabi rate Ω generates
//   H = (Ω/2)(e^{iϕ}|e⟩⟨g| + e^{-iϕ}|g⟩⟨e|),
// and pure dephasing adds (D/2)(2PρP - Pρ - ρP) with P = |e⟩⟨e|.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "qspforge/numkit.hpp"
#include "qspforge/qspcore.hpp"

namespace qspforge::pulse {

inline constexpr double kDefaultRabi = kTwoPi * 35.0e3;    // rad/s
inline constexpr double kDefaultDephasingPerRabi = 2.25e-4; // D / Ω

struct Pulse {
    double phase = 0.0;    ///< rad
    double duration = 0.0; ///< s
    double rabi = kDefaultRabi; ///< rad/s
    int layer = 0;         ///< QSP angle index j the pulse belongs to
};

struct PulseSequence {
    std::vector<Pulse> pulses;

    [[nodiscard]] double total_duration() const;
    [[nodiscard]] int count_in_layer(int layer) const;
    void append(const PulseSequence &other);
};

struct NoiseSpec {
    double dephasing = kDefaultDephasingPerRabi * kDefaultRabi; ///< D, 1/s
    double op_err = 0.0;                                     ///< Err
    double rabi = kDefaultRabi;                                ///< Ω
    /// Optional multiplicative Gaussian jitter on every pulse duration.
    double jitter_sigma = 0.0;
    std::uint64_t jitter_seed = 0;

    void validate() const;
    static NoiseSpec noiseless(double rabi = kDefaultRabi);
    static NoiseSpec standard(double dephasing_scale = 1.0);
    [[nodiscard]] double pi_time() const { return kPi / rabi; }
};

enum class GateKind { Ry, Rz, RzSignal };

/// Pulse phases used by the compiler. calibrate() searches the sign choices
/// around the nominal (π/2, 0, 3π/2) for the composite Rz.
struct Calibration {
    double ry_phase = kPi / 2;
    std::array<double, 3> rz_phases{kPi / 2, 0.0, 3 * kPi / 2};
};

Calibration calibrate();
const Calibration &default_calibration();

/// Reduce an angle to (-π, π]; the gate changes by a global phase only.
double wrap_angle(double a);

PulseSequence compile_gate(GateKind kind, double angle, double rabi,
                           int layer = 0,
                           const Calibration &cal = default_calibration());

/// The full program for W(x)|0⟩ in time order. Every rotation parameter,
/// signal included, is first scaled by (1 - op_err). Rz(ω) is dropped: it
/// acts last and cannot change ⟨Z⟩.
PulseSequence compile_circuit(const qsp::AngleSequence &seq, double x,
                              const NoiseSpec &spec,
                              const Calibration &cal = default_calibration());

/// Exact noiseless propagator of one pulse / a sequence (pulse basis).
CMat pulse_unitary(const Pulse &p);
CMat sequence_unitary(const PulseSequence &seq);

/// Convert a QSP-basis gate into the pulse basis (X·G·X).
CMat to_pulse_basis(const CMat &qsp_gate);

class DensityMatrix {
  public:
    explicit DensityMatrix(CMat rho);
    static DensityMatrix ground();               ///< |g⟩⟨g|
    static DensityMatrix pure(std::span<const cplx> psi);
    static DensityMatrix maximally_mixed();

    [[nodiscard]] const CMat &matrix() const noexcept { return rho_; }
    [[nodiscard]] cplx operator()(int r, int c) const { return rho_(r, c); }
    /// Throws InvariantError if trace, Hermiticity or positivity fail.
    void validate() const;
    /// tr(Z_qsp ρ) = P_g - P_e.
    [[nodiscard]] double z_expectation() const;
    [[nodiscard]] double excited_population() const;

  private:
    CMat rho_;
};

/// Default RK4 step T/200.
double default_step(const NoiseSpec &spec);

/// Fixed-step RK4 on the Lindblad equation over the pulse duration.
/// Requires dt ≤ (π/Ω)/100.
DensityMatrix lindblad_evolve(const DensityMatrix &rho, const Pulse &p,
                              const NoiseSpec &spec, double dt);

/// H = 0 dephasing-only evolution for `duration` seconds.
DensityMatrix free_evolve(const DensityMatrix &rho, double duration,
                          const NoiseSpec &spec, double dt);

enum class CoherenceWindow {
    Free,   ///< H = 0 during the window (off-diagonals only decay)
    Driven, ///< resonant phase-0 drive for the window
};

struct CoherenceOptions {
    CoherenceWindow window = CoherenceWindow::Free;
    double window_periods = 1.0; ///< in Rabi periods 2π/Ω
    int samples = 64;
};

/// max over the window of Σ_{m≠n} |ρ_mn|.
double coherence(const DensityMatrix &rho, const NoiseSpec &spec,
                 const CoherenceOptions &opts = {});

struct NoisyRunOptions {
    double dt = 0.0; ///< 0 selects default_step
    bool record_coherence = false;
    CoherenceOptions coherence;
};

struct LayerRecord {
    int layer = 0;          ///< angle index j just completed
    double elapsed = 0.0;   ///< s since the program started
    double coherence = 0.0;
};

struct NoisyRun {
    double expectation = 0.0;
    std::vector<LayerRecord> layers; ///< in execution order
    double total_time = 0.0;
    int pulse_count = 0;
};

NoisyRun run_noisy_qsp(const qsp::AngleSequence &seq, double x,
                       const NoiseSpec &spec, const NoisyRunOptions &opts = {});

/// Coherence trace of a qubit parked in |+⟩ and left idle, measured with
/// the same window at the given elapsed times.
std::vector<double> free_coherence_trace(std::span<const double> times,
                                         const NoiseSpec &spec,
                                         const CoherenceOptions &opts = {});

/// One layer of the fully dephasing toy model, QSP basis (|0⟩, |1⟩).
DensityMatrix toy_dephasing_step(cplx p_n, cplx q_n, double theta, double phi);

/// π/2 (phase 0) - free delay τ - π/2 (phase ϕ_k) with ideal pulses; contrast
/// (P_max - P_min)/(P_max + P_min) of the |1⟩ population over the scan.
double ramsey_contrast(double delay, const NoiseSpec &spec,
                       std::span<const double> phases);

/// Uniform scan phases 2πk/n.
std::vector<double> ramsey_phases(int n = 16);

/// Least-squares rate k of C(τ) ≈ C0 e^{-kτ} (log-linear fit).
double fit_decay_rate(std::span<const double> delays,
                      std::span<const double> contrasts);

/// Pulse program dump: index,phase_rad,duration_s,rabi_rad_per_s,layer.
void write_pulse_csv(std::ostream &os, const PulseSequence &seq);

} // namespace qspforge::pulse
