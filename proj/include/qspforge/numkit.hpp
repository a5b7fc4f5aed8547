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

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "qspforge/errors.hpp"

namespace qspforge {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Tolerances shared by every module. One global record; tests may read it
/// but the library never mutates it.
struct NumericPolicy {
    double unitary_tol = 1e-9;        ///< input-unitarity check
    double reconstruction_tol = 1e-8; ///< eigendecomposition residual
    double density_trace_tol = 1e-9;
    double density_herm_tol = 1e-10;
    double density_min_eig = -1e-9;
    double real_coeff_tol = 1e-12;    ///< c_{-k} == conj(c_k)
};

const NumericPolicy &numeric_policy() noexcept;

/// Dense square complex matrix, row-major.
class CMat {
  public:
    CMat() = default;
    explicit CMat(int dim);
    CMat(int dim, std::vector<cplx> entries);
    CMat(std::initializer_list<std::initializer_list<cplx>> rows);

    static CMat identity(int dim);
    static CMat diagonal(std::span<const cplx> diag);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] cplx &operator()(int r, int c) { return data_[idx(r, c)]; }
    [[nodiscard]] const cplx &operator()(int r, int c) const {
        return data_[idx(r, c)];
    }
    [[nodiscard]] std::span<const cplx> entries() const noexcept {
        return data_;
    }
    [[nodiscard]] std::span<cplx> entries() noexcept { return data_; }

    [[nodiscard]] CMat adjoint() const;
    [[nodiscard]] cplx trace() const;
    [[nodiscard]] std::vector<cplx> apply(std::span<const cplx> v) const;

    CMat &operator*=(cplx s);
    CMat &operator+=(const CMat &o);
    CMat &operator-=(const CMat &o);

  private:
    [[nodiscard]] std::size_t idx(int r, int c) const noexcept {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(dim_) +
               static_cast<std::size_t>(c);
    }
    int dim_ = 0;
    std::vector<cplx> data_;
};

CMat operator+(CMat a, const CMat &b);
CMat operator-(CMat a, const CMat &b);
CMat operator*(cplx s, CMat a);

/// Exact product a·b. Throws DimensionError when the dimensions differ.
CMat matmul(const CMat &a, const CMat &b);
CMat kron(const CMat &a, const CMat &b);

/// max_{ij} |a_ij - b_ij|
double max_abs_diff(const CMat &a, const CMat &b);

/// Distance after removing the best global phase e^{i g} from b.
double phase_aligned_distance(const CMat &a, const CMat &b);

bool is_unitary(const CMat &u, double tol);
bool is_hermitian(const CMat &m, double tol);
/// trace ~ 1, Hermitian, and smallest eigenvalue above -tol.
bool is_density(const CMat &rho, double tol);
double unitarity_residual(const CMat &u);
double min_hermitian_eigenvalue(const CMat &m);

struct EigenPair {
    double phase;             ///< eigenphase in [0, 2π)
    std::vector<cplx> vector; ///< unit-norm eigenvector
};

/// Spectral decomposition of a unitary (dim ≤ 16). Eigenvectors come out
/// orthonormal even on degenerate subspaces.
std::vector<EigenPair> eig_unitary(const CMat &u);

/// Σ e^{iτ_j}|χ_j⟩⟨χ_j|
CMat reconstruct(std::span<const EigenPair> pairs);

/// Deterministic random stream keyed by (seed, stream id).
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi);
    /// Standard normal (Box-Muller).
    double normal();
    bool bernoulli(double p);

    /// An independent stream derived from this one's key.
    [[nodiscard]] RngStream substream(std::uint64_t index) const;

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the R
/// diagonal phases folded back into Q.
CMat random_unitary(int dim, RngStream &rng);

} // namespace qspforge
