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

// Batched trigonometric-QSP kernels over a grid of signal values.
//
// Every kernel exists as a scalar reference and, on x86-64, an AVX2/FMA
// variant that processes four signal values per vector lane. The active
// variant is picked once at startup from CPUID and can be overridden with
// QSPFORGE_SIMD=scalar|avx2 or force_isa().

#include <span>
#include <string_view>

namespace qspforge::kernels {

enum class Isa { Scalar, Avx2 };

/// Angles of W(x) = Rz(ω) A(θ0,φ0) Π_{j=1..L} Rz(x) A(θj,φj).
struct CircuitView {
    double omega = 0.0;
    std::span<const double> theta; ///< length L+1
    std::span<const double> phi;   ///< length L+1
    [[nodiscard]] int layers() const noexcept {
        return static_cast<int>(theta.size()) - 1;
    }
};

/// ⟨Z⟩ of W(x)|0⟩ for every x.
using ExpectationFn = void (*)(const CircuitView &, std::span<const double> xs,
                               std::span<double> out);

/// loss = (1/N) Σ_i (⟨Z⟩(x_i) - y_i)^2. When `grad` is non-empty it receives
/// ∂loss/∂(ω, θ0..θL, φ0..φL), length 2L+3.
using LossGradFn = double (*)(const CircuitView &, std::span<const double> xs,
                              std::span<const double> ys,
                              std::span<double> grad);

namespace scalar {
void expectation_batch(const CircuitView &c, std::span<const double> xs,
                       std::span<double> out);
double loss_grad_batch(const CircuitView &c, std::span<const double> xs,
                       std::span<const double> ys, std::span<double> grad);
} // namespace scalar

namespace avx2 {
void expectation_batch(const CircuitView &c, std::span<const double> xs,
                       std::span<double> out);
double loss_grad_batch(const CircuitView &c, std::span<const double> xs,
                       std::span<const double> ys, std::span<double> grad);
} // namespace avx2

[[nodiscard]] bool isa_supported(Isa isa) noexcept;
[[nodiscard]] Isa active_isa() noexcept;
/// Throws PreconditionError if the CPU lacks the requested ISA.
void force_isa(Isa isa);
[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;

// Dispatching entry points.
void expectation_batch(const CircuitView &c, std::span<const double> xs,
                       std::span<double> out);
double loss_grad_batch(const CircuitView &c, std::span<const double> xs,
                       std::span<const double> ys, std::span<double> grad);

} // namespace qspforge::kernels
