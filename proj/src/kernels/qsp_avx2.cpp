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
// Compiled with -mavx2 -mfma. Only reached through the runtime dispatcher
// after CPUID reports both extensions.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qspforge/errors.hpp"
#include "qspforge/kernels.hpp"

namespace qspforge::kernels::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

struct alignas(32) LayerTrigV {
    __m256d cos_half_theta;
    __m256d sin_half_theta;
    __m256d phi_re; // e^{-iφ/2}
    __m256d phi_im;
};

// Two-component state for four lanes.
struct State {
    __m256d are, aim, bre, bim;
};

std::vector<LayerTrigV> layer_table(const CircuitView &c) {
    std::vector<LayerTrigV> t(c.theta.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
        t[j].cos_half_theta = _mm256_set1_pd(std::cos(0.5 * c.theta[j]));
        t[j].sin_half_theta = _mm256_set1_pd(std::sin(0.5 * c.theta[j]));
        t[j].phi_re = _mm256_set1_pd(std::cos(0.5 * c.phi[j]));
        t[j].phi_im = _mm256_set1_pd(-std::sin(0.5 * c.phi[j]));
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

// z *= (er + i ei)
inline void cmul(__m256d &re, __m256d &im, __m256d er, __m256d ei) {
    const __m256d nre = _mm256_fmsub_pd(re, er, _mm256_mul_pd(im, ei));
    const __m256d nim = _mm256_fmadd_pd(re, ei, _mm256_mul_pd(im, er));
    re = nre;
    im = nim;
}

// Rz: a *= e, b *= conj(e)
inline void apply_rz(State &s, __m256d er, __m256d ei) {
    cmul(s.are, s.aim, er, ei);
    const __m256d nei = _mm256_sub_pd(_mm256_setzero_pd(), ei);
    cmul(s.bre, s.bim, er, nei);
}

inline void apply_ry(State &s, __m256d c, __m256d sn) {
    const __m256d nare = _mm256_fnmadd_pd(sn, s.bre, _mm256_mul_pd(c, s.are));
    const __m256d naim = _mm256_fnmadd_pd(sn, s.bim, _mm256_mul_pd(c, s.aim));
    const __m256d nbre = _mm256_fmadd_pd(sn, s.are, _mm256_mul_pd(c, s.bre));
    const __m256d nbim = _mm256_fmadd_pd(sn, s.aim, _mm256_mul_pd(c, s.bim));
    s.are = nare;
    s.aim = naim;
    s.bre = nbre;
    s.bim = nbim;
}

inline __m256d norm2(__m256d re, __m256d im) {
    return _mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im));
}

// Im(conj(l)·z) = l.re z.im - l.im z.re
inline __m256d im_conj_mul(__m256d lre, __m256d lim, __m256d zre, __m256d zim) {
    return _mm256_fmsub_pd(lre, zim, _mm256_mul_pd(lim, zre));
}

inline double hsum(__m256d v) {
    alignas(32) double lanes[kLanes];
    _mm256_store_pd(lanes, v);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

struct SignalLanes {
    __m256d re, im; // e^{-ix/2}
};

SignalLanes load_signal(std::span<const double> xs, std::size_t base,
                        std::size_t count) {
    alignas(32) double re[kLanes] = {1.0, 1.0, 1.0, 1.0};
    alignas(32) double im[kLanes] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t l = 0; l < count; ++l) {
        re[l] = std::cos(0.5 * xs[base + l]);
        im[l] = -std::sin(0.5 * xs[base + l]);
    }
    return {_mm256_load_pd(re), _mm256_load_pd(im)};
}

State forward(const std::vector<LayerTrigV> &t, const SignalLanes &sig) {
    State s{_mm256_set1_pd(1.0), _mm256_setzero_pd(), _mm256_setzero_pd(),
            _mm256_setzero_pd()};
    const int layers = static_cast<int>(t.size()) - 1;
    for (int j = layers; j >= 0; --j) {
        const auto &g = t[static_cast<std::size_t>(j)];
        apply_rz(s, g.phi_re, g.phi_im);
        apply_ry(s, g.cos_half_theta, g.sin_half_theta);
        if (j > 0) {
            apply_rz(s, sig.re, sig.im);
        }
    }
    return s;
}

} // namespace

void expectation_batch(const CircuitView &c, std::span<const double> xs,
                       std::span<double> out) {
    check_shapes(c, xs.size(), out.size());
    const auto t = layer_table(c);
    for (std::size_t base = 0; base < xs.size(); base += kLanes) {
        const std::size_t count = std::min(kLanes, xs.size() - base);
        const State s = forward(t, load_signal(xs, base, count));
        alignas(32) double z[kLanes];
        _mm256_store_pd(z, _mm256_sub_pd(norm2(s.are, s.aim), norm2(s.bre, s.bim)));
        for (std::size_t l = 0; l < count; ++l) {
            out[base + l] = z[l];
        }
    }
}

double loss_grad_batch(const CircuitView &c, std::span<const double> xs,
                       std::span<const double> ys, std::span<double> grad) {
    check_shapes(c, xs.size(), ys.size());
    const int layers = c.layers();
    const bool want_grad = !grad.empty();
    const std::size_t n_params = static_cast<std::size_t>(2 * layers + 3);
    if (want_grad && grad.size() != n_params) {
        throw DimensionError("loss_grad_batch: gradient needs 2L+3 slots");
    }
    const auto t = layer_table(c);
    const __m256d om_re = _mm256_set1_pd(std::cos(0.5 * c.omega));
    const __m256d om_im = _mm256_set1_pd(-std::sin(0.5 * c.omega));
    const __m256d om_im_neg = _mm256_set1_pd(std::sin(0.5 * c.omega));
    const double inv_n = 1.0 / static_cast<double>(xs.size());
    const __m256d two_inv_n = _mm256_set1_pd(2.0 * inv_n);

    std::vector<__m256d> acc(want_grad ? n_params : 0, _mm256_setzero_pd());
    __m256d loss_acc = _mm256_setzero_pd();

    for (std::size_t base = 0; base < xs.size(); base += kLanes) {
        const std::size_t count = std::min(kLanes, xs.size() - base);
        const SignalLanes sig = load_signal(xs, base, count);
        State s = forward(t, sig);
        apply_rz(s, om_re, om_im);

        alignas(32) double y[kLanes] = {0.0, 0.0, 0.0, 0.0};
        alignas(32) double mask[kLanes] = {0.0, 0.0, 0.0, 0.0};
        for (std::size_t l = 0; l < count; ++l) {
            y[l] = ys[base + l];
            mask[l] = 1.0;
        }
        const __m256d z =
            _mm256_sub_pd(norm2(s.are, s.aim), norm2(s.bre, s.bim));
        const __m256d resid =
            _mm256_mul_pd(_mm256_sub_pd(z, _mm256_load_pd(y)), _mm256_load_pd(mask));
        loss_acc = _mm256_fmadd_pd(resid, resid, loss_acc);
        if (!want_grad) {
            continue;
        }

        const __m256d w = _mm256_mul_pd(two_inv_n, resid);
        const __m256d zero = _mm256_setzero_pd();
        State lam{s.are, s.aim, _mm256_sub_pd(zero, s.bre),
                  _mm256_sub_pd(zero, s.bim)};
        auto z_term = [&]() {
            // Im(λ† Z ψ)
            return _mm256_sub_pd(im_conj_mul(lam.are, lam.aim, s.are, s.aim),
                                 im_conj_mul(lam.bre, lam.bim, s.bre, s.bim));
        };
        acc[0] = _mm256_fmadd_pd(w, z_term(), acc[0]);
        apply_rz(s, om_re, om_im_neg);
        apply_rz(lam, om_re, om_im_neg);
        const __m256d sig_im_neg = _mm256_sub_pd(zero, sig.im);
        for (int j = 0; j <= layers; ++j) {
            const auto &g = t[static_cast<std::size_t>(j)];
            if (j > 0) {
                apply_rz(s, sig.re, sig_im_neg);
                apply_rz(lam, sig.re, sig_im_neg);
            }
            // Yψ = (-i b, i a) -> re/im: (b.im, -b.re), (-a.im, a.re)
            const __m256d y_term = _mm256_add_pd(
                im_conj_mul(lam.are, lam.aim, s.bim, _mm256_sub_pd(zero, s.bre)),
                im_conj_mul(lam.bre, lam.bim, _mm256_sub_pd(zero, s.aim), s.are));
            auto &gt = acc[static_cast<std::size_t>(1 + j)];
            gt = _mm256_fmadd_pd(w, y_term, gt);
            const __m256d nsin = _mm256_sub_pd(zero, g.sin_half_theta);
            apply_ry(s, g.cos_half_theta, nsin);
            apply_ry(lam, g.cos_half_theta, nsin);

            auto &gp = acc[static_cast<std::size_t>(2 + layers + j)];
            gp = _mm256_fmadd_pd(w, z_term(), gp);
            const __m256d nphi_im = _mm256_sub_pd(zero, g.phi_im);
            apply_rz(s, g.phi_re, nphi_im);
            apply_rz(lam, g.phi_re, nphi_im);
        }
    }
    if (want_grad) {
        for (std::size_t p = 0; p < n_params; ++p) {
            grad[p] = hsum(acc[p]);
        }
    }
    return hsum(loss_acc) * inv_n;
}

} // namespace qspforge::kernels::avx2
