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
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "qspforge/errors.hpp"
#include "qspforge/kernels.hpp"

namespace qspforge::kernels::scalar {

namespace {

using cplx = std::complex<double>;

struct LayerTrig {
    double cos_half_theta;
    double sin_half_theta;
    cplx rz_half_phi; // e^{-iφ/2}
};

std::vector<LayerTrig> layer_table(const CircuitView &c) {
    std::vector<LayerTrig> t(c.theta.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
        t[j].cos_half_theta = std::cos(0.5 * c.theta[j]);
        t[j].sin_half_theta = std::sin(0.5 * c.theta[j]);
        t[j].rz_half_phi = std::polar(1.0, -0.5 * c.phi[j]);
    }
    return t;
}

void check_shapes(const CircuitView &c, std::size_t n_x, std::size_t n_out) {
    if (c.theta.empty() || c.theta.size() != c.phi.size()) {
        throw DimensionError("qsp kernel: theta and phi must both have L+1 entries");
    }
    if (n_x != n_out) {
        throw DimensionError("qsp kernel: output length mismatch");
    }
}

// Rz(α)ψ with e = e^{-iα/2}
inline void apply_rz(cplx &a, cplx &b, cplx e) {
    a *= e;
    b *= std::conj(e);
}

// Ry(θ)ψ
inline void apply_ry(cplx &a, cplx &b, double c, double s) {
    const cplx na = c * a - s * b;
    const cplx nb = s * a + c * b;
    a = na;
    b = nb;
}

inline double expectation_at(const std::vector<LayerTrig> &t, cplx signal) {
    cplx a{1.0, 0.0};
    cplx b{};
    const int layers = static_cast<int>(t.size()) - 1;
    for (int j = layers; j >= 0; --j) {
        const auto &g = t[static_cast<std::size_t>(j)];
        apply_rz(a, b, g.rz_half_phi);
        apply_ry(a, b, g.cos_half_theta, g.sin_half_theta);
        if (j > 0) {
            apply_rz(a, b, signal);
        }
    }
    return std::norm(a) - std::norm(b);
}

} // namespace

void expectation_batch(const CircuitView &c, std::span<const double> xs,
                       std::span<double> out) {
    check_shapes(c, xs.size(), out.size());
    const auto t = layer_table(c);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out[i] = expectation_at(t, std::polar(1.0, -0.5 * xs[i]));
    }
}

double loss_grad_batch(const CircuitView &c, std::span<const double> xs,
                       std::span<const double> ys, std::span<double> grad) {
    check_shapes(c, xs.size(), ys.size());
    const int layers = c.layers();
    const bool want_grad = !grad.empty();
    if (want_grad && grad.size() != static_cast<std::size_t>(2 * layers + 3)) {
        throw DimensionError("loss_grad_batch: gradient needs 2L+3 slots");
    }
    const auto t = layer_table(c);
    const cplx rz_omega = std::polar(1.0, -0.5 * c.omega);
    const double inv_n = 1.0 / static_cast<double>(xs.size());

    if (want_grad) {
        std::fill(grad.begin(), grad.end(), 0.0);
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const cplx signal = std::polar(1.0, -0.5 * xs[i]);
        // forward
        cplx a{1.0, 0.0};
        cplx b{};
        for (int j = layers; j >= 0; --j) {
            const auto &g = t[static_cast<std::size_t>(j)];
            apply_rz(a, b, g.rz_half_phi);
            apply_ry(a, b, g.cos_half_theta, g.sin_half_theta);
            if (j > 0) {
                apply_rz(a, b, signal);
            }
        }
        apply_rz(a, b, rz_omega);
        const double z = std::norm(a) - std::norm(b);
        const double resid = z - ys[i];
        loss += resid * resid;
        if (!want_grad) {
            continue;
        }

        // reverse sweep: λ = (gates to the left)† Z ψ_final, ψ walked back
        // through the inverse gates. ∂⟨Z⟩/∂α = Im(λ† Z ψ) after Rz(α),
        // Im(λ† Y ψ) after Ry(α).
        const double w = 2.0 * resid * inv_n;
        cplx la = a;
        cplx lb = -b;
        // Rz(ω)
        grad[0] += w * std::imag(std::conj(la) * a - std::conj(lb) * b);
        apply_rz(a, b, std::conj(rz_omega));
        apply_rz(la, lb, std::conj(rz_omega));
        for (int j = 0; j <= layers; ++j) {
            const auto &g = t[static_cast<std::size_t>(j)];
            if (j > 0) {
                apply_rz(a, b, std::conj(signal));
                apply_rz(la, lb, std::conj(signal));
            }
            // Ry(θj): Yψ = (-i b, i a)
            const cplx ya = cplx(b.imag(), -b.real());
            const cplx yb = cplx(-a.imag(), a.real());
            grad[static_cast<std::size_t>(1 + j)] +=
                w * std::imag(std::conj(la) * ya + std::conj(lb) * yb);
            apply_ry(a, b, g.cos_half_theta, -g.sin_half_theta);
            apply_ry(la, lb, g.cos_half_theta, -g.sin_half_theta);
            // Rz(φj)
            grad[static_cast<std::size_t>(2 + layers + j)] +=
                w * std::imag(std::conj(la) * a - std::conj(lb) * b);
            apply_rz(a, b, std::conj(g.rz_half_phi));
            apply_rz(la, lb, std::conj(g.rz_half_phi));
        }
    }
    return loss * inv_n;
}

} // namespace qspforge::kernels::scalar
