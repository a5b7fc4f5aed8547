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

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qspforge/numkit.hpp"

namespace qspforge {

namespace {

constexpr int kMaxEigDim = 16;
constexpr int kSchurIterationsPerDim = 60;

Eigen::MatrixXcd to_eigen(const CMat &m) {
    const int n = m.dim();
    Eigen::MatrixXcd e(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            e(r, c) = m(r, c);
        }
    }
    return e;
}

CMat from_eigen(const Eigen::MatrixXcd &e) {
    const int n = static_cast<int>(e.rows());
    CMat m(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            m(r, c) = e(r, c);
        }
    }
    return m;
}

double wrap_phase(double phase) {
    double p = std::fmod(phase, kTwoPi);
    if (p < 0.0) {
        p += kTwoPi;
    }
    // fmod can hand back exactly 2π after the shift for tiny negatives
    return p >= kTwoPi ? 0.0 : p;
}

} // namespace

std::vector<EigenPair> eig_unitary(const CMat &u) {
    const auto &policy = numeric_policy();
    if (u.dim() > kMaxEigDim) {
        throw DimensionError("eig_unitary: dimension above 16");
    }
    if (!is_unitary(u, policy.unitary_tol)) {
        throw PreconditionError("eig_unitary: input is not unitary");
    }

    // A unitary is normal, so its complex Schur form is diagonal and the
    // Schur vectors are an orthonormal eigenbasis, degenerate blocks included.
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur;
    schur.setMaxIterations(kSchurIterationsPerDim * u.dim());
    schur.compute(to_eigen(u));
    if (schur.info() != Eigen::Success) {
        throw ConvergenceError("eig_unitary: Schur iteration did not converge",
                               0.0);
    }
    const auto &t = schur.matrixT();
    const auto &q = schur.matrixU();

    const int n = u.dim();
    std::vector<EigenPair> pairs;
    pairs.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        EigenPair p;
        p.phase = wrap_phase(std::arg(t(j, j)));
        p.vector.resize(static_cast<std::size_t>(n));
        for (int r = 0; r < n; ++r) {
            p.vector[static_cast<std::size_t>(r)] = q(r, j);
        }
        pairs.push_back(std::move(p));
    }

    if (max_abs_diff(reconstruct(pairs), u) > policy.reconstruction_tol) {
        throw ConvergenceError(
            "eig_unitary: reconstruction residual above tolerance",
            max_abs_diff(reconstruct(pairs), u));
    }
    return pairs;
}

CMat reconstruct(std::span<const EigenPair> pairs) {
    if (pairs.empty()) {
        throw DimensionError("reconstruct: no eigenpairs");
    }
    const int n = static_cast<int>(pairs.front().vector.size());
    CMat out(n);
    for (const auto &p : pairs) {
        const cplx lambda = std::polar(1.0, p.phase);
        for (int r = 0; r < n; ++r) {
            const cplx lr = lambda * p.vector[static_cast<std::size_t>(r)];
            for (int c = 0; c < n; ++c) {
                out(r, c) += lr * std::conj(p.vector[static_cast<std::size_t>(c)]);
            }
        }
    }
    return out;
}

CMat random_unitary(int dim, RngStream &rng) {
    if (dim <= 0) {
        throw DimensionError("random_unitary: dimension must be positive");
    }
    Eigen::MatrixXcd g(dim, dim);
    // column-major fill order is part of the reproducibility contract
    for (int c = 0; c < dim; ++c) {
        for (int r = 0; r < dim; ++r) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(r, c) = cplx(re, im) / std::sqrt(2.0);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const cplx d = r(j, j);
        const double mag = std::abs(d);
        q.col(j) *= mag > 0.0 ? d / mag : cplx{1.0};
    }
    return from_eigen(q);
}

} // namespace qspforge
