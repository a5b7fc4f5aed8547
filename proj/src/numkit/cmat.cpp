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

#include <Eigen/Eigenvalues>

#include "qspforge/numkit.hpp"

namespace qspforge {

const NumericPolicy &numeric_policy() noexcept {
    static const NumericPolicy policy{};
    return policy;
}

CMat::CMat(int dim) : dim_(dim) {
    if (dim <= 0) {
        throw DimensionError("CMat: dimension must be positive");
    }
    data_.assign(static_cast<std::size_t>(dim) * dim, cplx{});
}

CMat::CMat(int dim, std::vector<cplx> entries)
    : dim_(dim), data_(std::move(entries)) {
    if (dim <= 0 ||
        data_.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
        throw DimensionError("CMat: entry count must equal dim^2");
    }
}

CMat::CMat(std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(static_cast<int>(rows.size())) {
    data_.reserve(rows.size() * rows.size());
    for (const auto &row : rows) {
        if (row.size() != rows.size()) {
            throw DimensionError("CMat: rows must form a square matrix");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

CMat CMat::identity(int dim) {
    CMat m(dim);
    for (int i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

CMat CMat::diagonal(std::span<const cplx> diag) {
    CMat m(static_cast<int>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i) {
        m(static_cast<int>(i), static_cast<int>(i)) = diag[i];
    }
    return m;
}

CMat CMat::adjoint() const {
    CMat out(dim_);
    for (int r = 0; r < dim_; ++r) {
        for (int c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

cplx CMat::trace() const {
    cplx t{};
    for (int i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

std::vector<cplx> CMat::apply(std::span<const cplx> v) const {
    if (v.size() != static_cast<std::size_t>(dim_)) {
        throw DimensionError("CMat::apply: vector length mismatch");
    }
    std::vector<cplx> out(v.size());
    for (int r = 0; r < dim_; ++r) {
        cplx acc{};
        for (int c = 0; c < dim_; ++c) {
            acc += (*this)(r, c) * v[static_cast<std::size_t>(c)];
        }
        out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
}

CMat &CMat::operator*=(cplx s) {
    for (auto &z : data_) {
        z *= s;
    }
    return *this;
}

CMat &CMat::operator+=(const CMat &o) {
    if (o.dim_ != dim_) {
        throw DimensionError("CMat: dimension mismatch in +=");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += o.data_[i];
    }
    return *this;
}

CMat &CMat::operator-=(const CMat &o) {
    if (o.dim_ != dim_) {
        throw DimensionError("CMat: dimension mismatch in -=");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= o.data_[i];
    }
    return *this;
}

CMat operator+(CMat a, const CMat &b) { return a += b; }
CMat operator-(CMat a, const CMat &b) { return a -= b; }
CMat operator*(cplx s, CMat a) { return a *= s; }

CMat matmul(const CMat &a, const CMat &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("matmul: dimension mismatch (" +
                             std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()) + ")");
    }
    const int n = a.dim();
    CMat out(n);
    for (int r = 0; r < n; ++r) {
        for (int k = 0; k < n; ++k) {
            const cplx ark = a(r, k);
            if (ark == cplx{}) {
                continue;
            }
            for (int c = 0; c < n; ++c) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

CMat kron(const CMat &a, const CMat &b) {
    const int na = a.dim();
    const int nb = b.dim();
    CMat out(na * nb);
    for (int ra = 0; ra < na; ++ra) {
        for (int ca = 0; ca < na; ++ca) {
            const cplx s = a(ra, ca);
            for (int rb = 0; rb < nb; ++rb) {
                for (int cb = 0; cb < nb; ++cb) {
                    out(ra * nb + rb, ca * nb + cb) = s * b(rb, cb);
                }
            }
        }
    }
    return out;
}

double max_abs_diff(const CMat &a, const CMat &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("max_abs_diff: dimension mismatch");
    }
    double worst = 0.0;
    const auto ea = a.entries();
    const auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) {
        worst = std::max(worst, std::abs(ea[i] - eb[i]));
    }
    return worst;
}

double phase_aligned_distance(const CMat &a, const CMat &b) {
    // Best phase maximizes Re(e^{-ig} tr(b† a)).
    const cplx overlap = matmul(b.adjoint(), a).trace();
    const cplx phase =
        std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx{1.0};
    return max_abs_diff(a, phase * b);
}

double unitarity_residual(const CMat &u) {
    return max_abs_diff(matmul(u.adjoint(), u), CMat::identity(u.dim()));
}

bool is_unitary(const CMat &u, double tol) {
    return unitarity_residual(u) <= tol;
}

bool is_hermitian(const CMat &m, double tol) {
    return max_abs_diff(m, m.adjoint()) <= tol;
}

double min_hermitian_eigenvalue(const CMat &m) {
    const int n = m.dim();
    Eigen::MatrixXcd e(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            // symmetrize so the solver sees an exactly Hermitian input
            e(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        e, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool is_density(const CMat &rho, double tol) {
    if (std::abs(rho.trace() - 1.0) > tol || !is_hermitian(rho, tol)) {
        return false;
    }
    return min_hermitian_eigenvalue(rho) >= -tol;
}

} // namespace qspforge
