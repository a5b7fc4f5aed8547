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

// Multi-qubit extension of a trigonometric QSP sequence ("QPP"):
//   V(U) = Rz(ω)A_0 Π_{l=1..L} [diag(U†, I) A_{2l-1} diag(I, U) A_{2l}],
// with the ancilla as the most significant qubit. On an eigenvector of U
// with phase τ, V acts as the 2L-layer single-qubit circuit at x = τ.

#include <span>
#include <vector>

#include "qspforge/numkit.hpp"
#include "qspforge/qspcore.hpp"
#include "qspforge/targets.hpp"

namespace qspforge::qpp {

class QppCircuit {
  public:
    /// `base` must hold 2L+1 angle pairs; 1 ≤ qubits ≤ 3.
    QppCircuit(qsp::AngleSequence base, int qubits);

    [[nodiscard]] const qsp::AngleSequence &base() const noexcept { return base_; }
    [[nodiscard]] int pairs() const noexcept { return base_.layers() / 2; }
    [[nodiscard]] int qubits() const noexcept { return qubits_; }
    [[nodiscard]] int system_dim() const noexcept { return 1 << qubits_; }

  private:
    qsp::AngleSequence base_;
    int qubits_;
};

/// Dense V(U), dimension 2^{n+1}.
CMat build_qpp_unitary(const QppCircuit &c, const CMat &u);

/// V applied to |0⟩⊗|ψ⟩ without forming the matrix.
std::vector<cplx> apply_qpp(const QppCircuit &c, const CMat &u,
                            std::span<const cplx> psi);

/// V([e^{iτ}]), the one-dimensional instance.
CMat reduce_to_single_qubit(const QppCircuit &c, double tau);

/// Largest deviation of V(U) from block form in U's eigenbasis: cross
/// entries ⟨a,χ_i|V|b,χ_j⟩ (i ≠ j) and diagonal blocks against
/// reduce_to_single_qubit(τ_i).
double block_residual(const QppCircuit &c, const CMat &u);

/// ⟨Z⟩ of the reduced circuit.
double fhat(const QppCircuit &c, double tau);

/// Map an eigenphase in [0, 2π) to the target domain [-π, π).
double to_signed_phase(double tau);

struct EigphaseRecord {
    double tau;   ///< [0, 2π)
    double f;
    double fhat;
    double sqerr;
};

struct EigphaseReport {
    std::vector<EigphaseRecord> records;
    double err_ext = 0.0;
};

EigphaseReport err_ext(const QppCircuit &c, const CMat &u,
                       const targets::TargetFn &f);

/// ∫_{-π}^{π} |f - f̂|² dx by the midpoint rule on `points` cells.
double err_qsp(const QppCircuit &c, const targets::TargetFn &f,
               int points = 10000);

struct QpeResult {
    double estimate = 0.0; ///< [0, 2π)
    int rounds = 0;
    long queries = 0;          ///< circuit shots, M per round
    long controlled_calls = 0; ///< queries · 2L controlled-U / U† uses
    double lo = 0.0;       ///< final arc [lo, lo + width)
    double width = 0.0;
};

/// Decision rounds ⌈log₂(2π/δ)⌉.
int qpe_rounds(double delta);

/// Binary search for the eigenphase of `eigenstate`. The first split is
/// dithered uniformly over the middle third of the circle; each later
/// round halves the current arc.
QpeResult qpe_binary_search(const CMat &u, std::span<const cplx> eigenstate,
                            double delta, const QppCircuit &c_step, int shots,
                            RngStream &rng);

/// Circular distance on [0, 2π).
double circular_distance(double a, double b);

} // namespace qspforge::qpp
