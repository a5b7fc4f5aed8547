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

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qspforge/numkit.hpp"

namespace qspforge::targets {

inline constexpr double kSeluAlpha = 1.6733;
inline constexpr double kDefaultSteepness = 100.0;

// Pointwise definitions on [-π, π]. Each throws DomainError outside it.
double eval_step(double x);
double eval_step_surrogate(double x, double steepness = kDefaultSteepness);
double eval_selu(double x);
double eval_relu(double x);

/// A real target f: [-π, π] -> [-1, 1].
struct TargetFn {
    std::string name;
    std::function<double(double)> evaluator;
    std::map<std::string, double> metadata;

    double operator()(double x) const { return evaluator(x); }
};

/// Built-in targets by name: "step" (arctan surrogate, metadata N),
/// "step_hard", "selu", "relu", "cos".
TargetFn make_target(const std::string &name,
                     double steepness = kDefaultSteepness);

/// Wrap a user sampler; the range contract is checked on a 10^4-point grid.
TargetFn custom_target(std::string name, std::function<double(double)> fn);

/// Max |f| over `points` uniform samples of [-π, π].
double grid_sup(const TargetFn &f, int points = 10000);

/// Laurent polynomial Σ_{|k|≤L} c_k e^{ikx}.
class TrigPoly {
  public:
    TrigPoly() = default;
    TrigPoly(int degree, std::vector<cplx> coeffs);

    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] cplx coeff(int k) const;
    void set_coeff(int k, cplx value);
    [[nodiscard]] std::span<const cplx> coeffs() const noexcept {
        return coeffs_;
    }
    /// c_{-k} == conj(c_k) within the numeric policy.
    [[nodiscard]] bool is_real_valued() const;

    [[nodiscard]] cplx eval(double x) const;
    [[nodiscard]] double eval_real(double x) const { return eval(x).real(); }

    /// max |Re F| on the circle: dense scan plus golden-section refinement.
    [[nodiscard]] double sup_abs() const;

    TrigPoly &operator*=(double s);

  private:
    int degree_ = 0;
    std::vector<cplx> coeffs_{cplx{}}; // index k + L
};

enum class GibbsFilter {
    None,    ///< raw truncated series
    Lanczos, ///< σ_k = sinc(k/(L+1)) damping
};

struct FourierOptions {
    int quadrature_points = 0; ///< 0 picks max(8L+8, 4096)
    GibbsFilter filter = GibbsFilter::None;
    bool normalize = true; ///< rescale by the sup when it exceeds 1
};

int default_quadrature_points(int degree);

/// Truncated Fourier series by the trapezoidal rule on a uniform periodic
/// grid. The two endpoints share one node carrying (f(-π) + f(π))/2.
TrigPoly fourier_truncate(const TargetFn &f, int degree,
                          const FourierOptions &opts = {});

/// Raw coefficients c_0..c_{kmax} (non-negative k only; f is real).
std::vector<cplx> fourier_coefficients(const TargetFn &f, int kmax,
                                       int quadrature_points);

/// 2π·Σ_{L<|k|≤L_ref}|c_k|², the squared L² error of the best degree-L
/// approximation. Requires L_ref ≥ 4L.
double parseval_floor(const TargetFn &f, int degree, int reference_degree,
                      int quadrature_points = 0);

/// 2π·Σ_{|k|>L}|c_k|² over the whole tail, from the discrete Parseval
/// identity ‖f‖² = 2π·Σ|c_k|² on an M-point grid (default max(8L+8, 2^17)).
double parseval_tail(const TargetFn &f, int degree, int quadrature_points = 0);

/// Uniform cell-centred grid x_j = -π + 2π(j + 1/2)/n.
std::vector<double> midpoint_grid(int n);
/// Uniform periodic grid x_j = -π + 2πj/n.
std::vector<double> periodic_grid(int n);

} // namespace qspforge::targets
