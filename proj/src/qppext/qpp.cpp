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

#include "qspforge/qppext.hpp"

namespace qspforge::qpp {

QppCircuit::QppCircuit(qsp::AngleSequence base, int qubits)
    : base_(std::move(base)), qubits_(qubits) {
    base_.validate();
    if (base_.layers() % 2 != 0) {
        throw PreconditionError("QPP base sequence needs an odd number (2L+1) of angle pairs");
    }
    if (qubits_ < 1 || qubits_ > 3) {
        throw PreconditionError("QPP system size must be 1..3 qubits");
    }
}

namespace {

void check_signal(const QppCircuit &c, const CMat &u) {
    if (u.dim() != c.system_dim()) {
        throw DimensionError("signal unitary dimension does not match 2^n");
    }
    if (!is_unitary(u, numeric_policy().unitary_tol)) {
        throw PreconditionError("signal operator is not unitary");
    }
}

// 2×2 gate g on the ancilla of |a⟩⊗|s⟩, state split as (top, bottom).
void apply_ancilla(const CMat &g, std::vector<cplx> &psi, int d) {
    for (int s = 0; s < d; ++s) {
        const auto i0 = static_cast<std::size_t>(s);
        const auto i1 = static_cast<std::size_t>(s + d);
        const cplx a = psi[i0];
        const cplx b = psi[i1];
        psi[i0] = g(0, 0) * a + g(0, 1) * b;
        psi[i1] = g(1, 0) * a + g(1, 1) * b;
    }
}

void apply_block(const CMat &m, std::vector<cplx> &psi, int offset, int d) {
    std::vector<cplx> tmp(static_cast<std::size_t>(d));
    for (int r = 0; r < d; ++r) {
        cplx acc{};
        for (int k = 0; k < d; ++k) {
            acc += m(r, k) * psi[static_cast<std::size_t>(offset + k)];
        }
        tmp[static_cast<std::size_t>(r)] = acc;
    }
    for (int r = 0; r < d; ++r) {
        psi[static_cast<std::size_t>(offset + r)] = tmp[static_cast<std::size_t>(r)];
    }
}

CMat angle_gate(const qsp::AngleSequence &s, int j) {
    const auto ju = static_cast<std::size_t>(j);
    return qsp::a_gate(s.theta[ju], s.phi[ju]);
}

} // namespace

std::vector<cplx> apply_qpp(const QppCircuit &c, const CMat &u,
                            std::span<const cplx> psi_in) {
    check_signal(c, u);
    const int d = c.system_dim();
    if (psi_in.size() != static_cast<std::size_t>(d)) {
        throw DimensionError("system state dimension does not match 2^n");
    }
    const CMat ud = u.adjoint();
    std::vector<cplx> psi(static_cast<std::size_t>(2 * d));
    std::copy(psi_in.begin(), psi_in.end(), psi.begin());
    const auto &s = c.base();
    // Rightmost factor acts first: l = L..1 applies A_{2l}, diag(I,U),
    // A_{2l-1}, diag(U†,I).
    for (int l = c.pairs(); l >= 1; --l) {
        apply_ancilla(angle_gate(s, 2 * l), psi, d);
        apply_block(u, psi, d, d);
        apply_ancilla(angle_gate(s, 2 * l - 1), psi, d);
        apply_block(ud, psi, 0, d);
    }
    apply_ancilla(matmul(qsp::rz(s.omega), angle_gate(s, 0)), psi, d);
    return psi;
}

CMat build_qpp_unitary(const QppCircuit &c, const CMat &u) {
    check_signal(c, u);
    const int d = c.system_dim();
    const CMat id = CMat::identity(d);
    const CMat ud = u.adjoint();
    auto controlled = [&](const CMat &top, const CMat &bottom) {
        CMat m(2 * d);
        for (int r = 0; r < d; ++r) {
            for (int k = 0; k < d; ++k) {
                m(r, k) = top(r, k);
                m(r + d, k + d) = bottom(r, k);
            }
        }
        return m;
    };
    const CMat pre = controlled(ud, id);
    const CMat post = controlled(id, u);
    const auto &s = c.base();
    CMat v = kron(matmul(qsp::rz(s.omega), angle_gate(s, 0)), id);
    for (int l = 1; l <= c.pairs(); ++l) {
        v = matmul(v, pre);
        v = matmul(v, kron(angle_gate(s, 2 * l - 1), id));
        v = matmul(v, post);
        v = matmul(v, kron(angle_gate(s, 2 * l), id));
    }
    return v;
}

CMat reduce_to_single_qubit(const QppCircuit &c, double tau) {
    if (!std::isfinite(tau)) {
        throw DomainError("eigenphase must be finite");
    }
    const cplx e = std::polar(1.0, tau);
    const auto &s = c.base();
    const CMat pre = CMat{{std::conj(e), 0.0}, {0.0, 1.0}};
    const CMat post = CMat{{1.0, 0.0}, {0.0, e}};
    CMat v = matmul(qsp::rz(s.omega), angle_gate(s, 0));
    for (int l = 1; l <= c.pairs(); ++l) {
        v = matmul(v, pre);
        v = matmul(v, angle_gate(s, 2 * l - 1));
        v = matmul(v, post);
        v = matmul(v, angle_gate(s, 2 * l));
    }
    return v;
}

double block_residual(const QppCircuit &c, const CMat &u) {
    const CMat v = build_qpp_unitary(c, u);
    const auto pairs = eig_unitary(u);
    const int d = c.system_dim();
    // Column (a, j) of V applied to |b⟩⊗|χ_j⟩.
    double worst = 0.0;
    for (int j = 0; j < d; ++j) {
        const auto &chi_j = pairs[static_cast<std::size_t>(j)].vector;
        const CMat r = reduce_to_single_qubit(c, pairs[static_cast<std::size_t>(j)].phase);
        for (int b = 0; b < 2; ++b) {
            std::vector<cplx> in(static_cast<std::size_t>(2 * d));
            for (int s = 0; s < d; ++s) {
                in[static_cast<std::size_t>(b * d + s)] = chi_j[static_cast<std::size_t>(s)];
            }
            const auto out = v.apply(in);
            for (int i = 0; i < d; ++i) {
                const auto &chi_i = pairs[static_cast<std::size_t>(i)].vector;
                for (int a = 0; a < 2; ++a) {
                    cplx amp{};
                    for (int s = 0; s < d; ++s) {
                        amp += std::conj(chi_i[static_cast<std::size_t>(s)]) *
                               out[static_cast<std::size_t>(a * d + s)];
                    }
                    const cplx want = i == j ? r(a, b) : cplx{};
                    worst = std::max(worst, std::abs(amp - want));
                }
            }
        }
    }
    return worst;
}

double fhat(const QppCircuit &c, double tau) {
    return qsp::expectation_z(c.base(), to_signed_phase(tau));
}

double to_signed_phase(double tau) {
    double t = std::fmod(tau, kTwoPi);
    if (t < 0.0) {
        t += kTwoPi;
    }
    return t >= kPi ? t - kTwoPi : t;
}

EigphaseReport err_ext(const QppCircuit &c, const CMat &u,
                       const targets::TargetFn &f) {
    check_signal(c, u);
    EigphaseReport rep;
    for (const auto &pair : eig_unitary(u)) {
        const double x = to_signed_phase(pair.phase);
        const double fx = f(x);
        const double gx = qsp::expectation_z(c.base(), x);
        const double e2 = (fx - gx) * (fx - gx);
        rep.records.push_back({pair.phase, fx, gx, e2});
        rep.err_ext = std::max(rep.err_ext, e2);
    }
    return rep;
}

double err_qsp(const QppCircuit &c, const targets::TargetFn &f, int points) {
    if (points < 1) {
        throw PreconditionError("quadrature needs at least one point");
    }
    const auto xs = targets::midpoint_grid(points);
    const auto zs = qsp::expectation_grid(c.base(), xs);
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = f(xs[i]) - zs[i];
        acc += r * r;
    }
    return acc * kTwoPi / points;
}

} // namespace qspforge::qpp
