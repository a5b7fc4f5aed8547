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

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qspforge/numkit.hpp"
#include "qspforge/targets.hpp"

namespace qspforge::qsp {

/// Parameters of W(x) = Rz(ω) A(θ0,φ0) Π_{j=1..L} Rz(x) A(θj,φj).
struct AngleSequence {
    double omega = 0.0;
    std::vector<double> theta; ///< L+1 entries
    std::vector<double> phi;   ///< L+1 entries

    [[nodiscard]] int layers() const noexcept {
        return static_cast<int>(theta.size()) - 1;
    }
    /// Throws PreconditionError on length mismatch or non-finite angles.
    void validate() const;

    static AngleSequence identity(int layers);
    /// Packed (ω, θ0..θL, φ0..φL).
    [[nodiscard]] std::vector<double> pack() const;
    static AngleSequence unpack(std::span<const double> packed);

    /// Append `extra` layers with θ = φ = 0 at the end of the product; the
    /// new gates act first on |0⟩ and leave ⟨Z⟩ unchanged.
    [[nodiscard]] AngleSequence padded(int extra) const;

    bool operator==(const AngleSequence &) const = default;
};

// Gate convention.
CMat rz(double alpha); ///< diag(e^{-iα/2}, e^{iα/2})
CMat ry(double theta); ///< [[c, -s], [s, c]] with half angles
CMat a_gate(double theta, double phi); ///< ry(θ)·rz(φ)

/// Full 2×2 circuit unitary at signal x ∈ [-π, π].
CMat evaluate_unitary(const AngleSequence &seq, double x);

/// ⟨0|W† Z W|0⟩ = |P|² - |Q|².
double expectation_z(const AngleSequence &seq, double x);

/// W = [[P, -Q], [Q*, P*]]: P = W00, Q = -W01.
std::pair<cplx, cplx> extract_pq(const AngleSequence &seq, double x);

/// Batched ⟨Z⟩ over a grid through the active SIMD kernel.
std::vector<double> expectation_grid(const AngleSequence &seq,
                                     std::span<const double> xs);

/// Uniform periodic training grid on [-π, π) with 4L+4 points.
std::vector<double> training_grid(int layers);

/// (1/N) Σ (⟨Z⟩(x_i) - F(x_i))² and its gradient (length 2L+3, ordered as
/// AngleSequence::pack()).
double loss_and_gradient(const AngleSequence &seq, const targets::TrigPoly &F,
                         std::span<const double> grid, std::vector<double> *grad);
std::vector<double> loss_gradient(const AngleSequence &seq,
                                  const targets::TrigPoly &F,
                                  std::span<const double> grid);

struct TrainConfig {
    int restarts = 8;
    int max_iterations = 5000;
    double tol = 1e-8;
    /// Stop launching restarts once one reaches tol. The winner is still
    /// the best of all restarts up to and including the first success.
    bool stop_on_success = true;
    double init_small = 0.1; ///< θ_j, φ_j ~ U[-0.1, 0.1], θ0 ~ U[-π, π]
    /// Optional seed for restart 0, padded to L layers.
    std::optional<AngleSequence> warm_start;
    int threads = 1;
    /// Throw TrainingFailure instead of returning an unconverged result.
    bool strict = true;
};

struct TrainResult {
    AngleSequence seq;
    double loss = 0.0;
    bool converged = false;
    int best_restart = 0;
    int restarts_run = 0;
    int iterations = 0; ///< iterations used by the winning restart
};

struct TrainingFailure : ConvergenceError {
    explicit TrainingFailure(TrainResult r);
    TrainResult result;
};

/// Fit angles so ⟨Z⟩ reproduces the real trigonometric polynomial F on the
/// training grid. Requires L ≥ deg(F) and grid-sup |F| ≤ 1.
TrainResult train_angles(const targets::TrigPoly &F, int layers,
                         const TrainConfig &cfg, const RngStream &rng);

} // namespace qspforge::qsp
