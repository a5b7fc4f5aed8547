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
#include <string>

#include "qspforge/targets.hpp"

namespace qspforge::targets {

TrigPoly::TrigPoly(int degree, std::vector<cplx> coeffs)
    : degree_(degree), coeffs_(std::move(coeffs)) {
    if (degree < 0 ||
        coeffs_.size() != static_cast<std::size_t>(2 * degree + 1)) {
        throw DimensionError("TrigPoly: need 2L+1 coefficients");
    }
}

cplx TrigPoly::coeff(int k) const {
    if (k < -degree_ || k > degree_) {
        return {};
    }
    return coeffs_[static_cast<std::size_t>(k + degree_)];
}

void TrigPoly::set_coeff(int k, cplx value) {
    if (k < -degree_ || k > degree_) {
        throw DimensionError("TrigPoly::set_coeff: index beyond degree");
    }
    coeffs_[static_cast<std::size_t>(k + degree_)] = value;
}

bool TrigPoly::is_real_valued() const {
    const double tol = numeric_policy().real_coeff_tol;
    for (int k = 0; k <= degree_; ++k) {
        if (std::abs(coeff(-k) - std::conj(coeff(k))) > tol) {
            return false;
        }
    }
    return true;
}

cplx TrigPoly::eval(double x) const {
    cplx acc = coeff(0);
    for (int k = 1; k <= degree_; ++k) {
        const cplx e = std::polar(1.0, k * x);
        acc += coeff(k) * e + coeff(-k) * std::conj(e);
    }
    return acc;
}

TrigPoly &TrigPoly::operator*=(double s) {
    for (auto &c : coeffs_) {
        c *= s;
    }
    return *this;
}

int default_quadrature_points(int degree) {
    return std::max(8 * degree + 8, 4096);
}

std::vector<cplx> fourier_coefficients(const TargetFn &f, int kmax,
                                       int quadrature_points) {
    const int m = quadrature_points;
    if (kmax < 0) {
        throw PreconditionError("fourier_coefficients: negative degree");
    }
    if (m < 8 * kmax + 8) {
        throw PreconditionError("fourier_coefficients: need M >= 8L+8 (M = " +
                                std::to_string(m) + ")");
    }
    std::vector<double> samples(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const double x = -kPi + kTwoPi * j / m;
        double v = f(x);
        if (j == 0) {
            v = 0.5 * (v + f(kPi));
        }
        if (!std::isfinite(v)) {
            throw DomainError("fourier_coefficients: non-finite sample of '" +
                              f.name + "' at x = " + std::to_string(x));
        }
        samples[static_cast<std::size_t>(j)] = v;
    }

    // e^{-ik x_j} = (-1)^k ω^{kj} with ω = e^{-2πi/M}; an exact twiddle table
    // indexed by kj mod M keeps every phase accurate to one rounding.
    std::vector<cplx> twiddle(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        twiddle[static_cast<std::size_t>(j)] = std::polar(1.0, -kTwoPi * j / m);
    }
    std::vector<cplx> out(static_cast<std::size_t>(kmax + 1));
    for (int k = 0; k <= kmax; ++k) {
        cplx acc{};
        std::size_t idx = 0;
        const auto step = static_cast<std::size_t>(k);
        for (int j = 0; j < m; ++j) {
            acc += samples[static_cast<std::size_t>(j)] * twiddle[idx];
            idx += step;
            if (idx >= static_cast<std::size_t>(m)) {
                idx -= static_cast<std::size_t>(m);
            }
        }
        acc /= static_cast<double>(m);
        out[static_cast<std::size_t>(k)] = (k % 2 == 0) ? acc : -acc;
    }
    return out;
}

TrigPoly fourier_truncate(const TargetFn &f, int degree,
                          const FourierOptions &opts) {
    if (degree < 0) {
        throw PreconditionError("fourier_truncate: negative degree");
    }
    const int m = opts.quadrature_points > 0 ? opts.quadrature_points
                                             : default_quadrature_points(degree);
    const auto half = fourier_coefficients(f, degree, m);

    std::vector<cplx> coeffs(static_cast<std::size_t>(2 * degree + 1));
    for (int k = 0; k <= degree; ++k) {
        double sigma = 1.0;
        if (opts.filter == GibbsFilter::Lanczos && k > 0) {
            const double t = kPi * k / (degree + 1.0);
            sigma = std::sin(t) / t;
        }
        const cplx c = sigma * half[static_cast<std::size_t>(k)];
        coeffs[static_cast<std::size_t>(degree + k)] = c;
        coeffs[static_cast<std::size_t>(degree - k)] = std::conj(c);
    }
    coeffs[static_cast<std::size_t>(degree)] =
        half[0].real(); // c_0 of a real function is real
    TrigPoly poly(degree, std::move(coeffs));

    if (opts.normalize) {
        const double sup = poly.sup_abs();
        if (sup > 1.0) {
            poly *= 1.0 / sup;
        }
    }
    return poly;
}

double TrigPoly::sup_abs() const {
    const int n = std::max(64 * (degree_ + 1), 1024);
    const double h = kTwoPi / n;
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = std::abs(eval_real(-kPi + h * i));
    }
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        const double mid = v[static_cast<std::size_t>(i)];
        const double prev = v[static_cast<std::size_t>((i + n - 1) % n)];
        const double next = v[static_cast<std::size_t>((i + 1) % n)];
        best = std::max(best, mid);
        if (mid < prev || mid < next) {
            continue;
        }
        // Golden-section refinement of the local peak in [x - h, x + h].
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = -kPi + h * (i - 1);
        double b = -kPi + h * (i + 1);
        double c = b - g * (b - a);
        double d = a + g * (b - a);
        double fc = std::abs(eval_real(c));
        double fd = std::abs(eval_real(d));
        for (int it = 0; it < 40; ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = std::abs(eval_real(c));
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = std::abs(eval_real(d));
            }
        }
        best = std::max({best, fc, fd});
    }
    return best;
}

double parseval_floor(const TargetFn &f, int degree, int reference_degree,
                      int quadrature_points) {
    if (degree < 0) {
        throw PreconditionError("parseval_floor: negative degree");
    }
    if (reference_degree < 4 * degree) {
        throw PreconditionError("parseval_floor: need L_ref >= 4L");
    }
    const int m = quadrature_points > 0
                      ? quadrature_points
                      : default_quadrature_points(reference_degree);
    const auto half = fourier_coefficients(f, reference_degree, m);
    double tail = 0.0;
    for (int k = reference_degree; k > degree; --k) {
        tail += std::norm(half[static_cast<std::size_t>(k)]);
    }
    // both ±k contribute
    return kTwoPi * 2.0 * tail;
}

double parseval_tail(const TargetFn &f, int degree, int quadrature_points) {
    if (degree < 0) {
        throw PreconditionError("parseval_tail: negative degree");
    }
    const int m = quadrature_points > 0 ? quadrature_points
                                        : std::max(8 * degree + 8, 1 << 17);
    const auto half = fourier_coefficients(f, degree, m);
    // Trapezoid mean of f² with the wrap node split between ±π.
    const double a = f(-kPi);
    const double b = f(kPi);
    double power = 0.5 * (a * a + b * b);
    for (int j = 1; j < m; ++j) {
        const double v = f(-kPi + kTwoPi * j / m);
        power += v * v;
    }
    power /= m;
    double head = std::norm(half[0]);
    for (int k = 1; k <= degree; ++k) {
        head += 2.0 * std::norm(half[static_cast<std::size_t>(k)]);
    }
    return kTwoPi * std::max(0.0, power - head);
}

} // namespace qspforge::targets
