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
#include <cmath>
#include <string>

#include "qspforge/kernels.hpp"
#include "qspforge/qspcore.hpp"

namespace qspforge::qsp {

namespace {

void check_signal(double x) {
    if (!std::isfinite(x) || x < -kPi - 1e-12 || x > kPi + 1e-12) {
        throw DomainError("qsp: signal x must lie in [-pi, pi]");
    }
}

kernels::CircuitView view_of(const AngleSequence &seq) {
    return kernels::CircuitView{seq.omega, seq.theta, seq.phi};
}

} // namespace

void AngleSequence::validate() const {
    if (theta.empty() || theta.size() != phi.size()) {
        throw PreconditionError(
            "AngleSequence: theta and phi must both hold L+1 angles");
    }
    if (!std::isfinite(omega)) {
        throw PreconditionError("AngleSequence: omega is not finite");
    }
    for (std::size_t j = 0; j < theta.size(); ++j) {
        if (!std::isfinite(theta[j]) || !std::isfinite(phi[j])) {
            throw PreconditionError("AngleSequence: angle " + std::to_string(j) +
                                    " is not finite");
        }
    }
}

AngleSequence AngleSequence::identity(int layers) {
    if (layers < 0) {
        throw PreconditionError("AngleSequence: negative layer count");
    }
    const auto n = static_cast<std::size_t>(layers + 1);
    return AngleSequence{0.0, std::vector<double>(n, 0.0),
                         std::vector<double>(n, 0.0)};
}

std::vector<double> AngleSequence::pack() const {
    std::vector<double> p;
    p.reserve(1 + theta.size() + phi.size());
    p.push_back(omega);
    p.insert(p.end(), theta.begin(), theta.end());
    p.insert(p.end(), phi.begin(), phi.end());
    return p;
}

AngleSequence AngleSequence::unpack(std::span<const double> packed) {
    if (packed.size() < 3 || (packed.size() - 1) % 2 != 0) {
        throw DimensionError("AngleSequence::unpack: need 2L+3 values");
    }
    const std::size_t n = (packed.size() - 1) / 2;
    AngleSequence s;
    s.omega = packed[0];
    s.theta.assign(packed.begin() + 1, packed.begin() + 1 + static_cast<long>(n));
    s.phi.assign(packed.begin() + 1 + static_cast<long>(n), packed.end());
    return s;
}

AngleSequence AngleSequence::padded(int extra) const {
    if (extra < 0) {
        throw PreconditionError("AngleSequence::padded: negative padding");
    }
    AngleSequence s = *this;
    s.theta.resize(theta.size() + static_cast<std::size_t>(extra), 0.0);
    s.phi.resize(phi.size() + static_cast<std::size_t>(extra), 0.0);
    return s;
}

CMat rz(double alpha) {
    const cplx e = std::polar(1.0, -0.5 * alpha);
    return CMat{{e, 0.0}, {0.0, std::conj(e)}};
}

CMat ry(double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    return CMat{{c, -s}, {s, c}};
}

CMat a_gate(double theta, double phi) { return matmul(ry(theta), rz(phi)); }

CMat evaluate_unitary(const AngleSequence &seq, double x) {
    seq.validate();
    check_signal(x);
    const CMat signal = rz(x);
    CMat w = matmul(rz(seq.omega), a_gate(seq.theta[0], seq.phi[0]));
    for (int j = 1; j <= seq.layers(); ++j) {
        const auto jj = static_cast<std::size_t>(j);
        w = matmul(w, matmul(signal, a_gate(seq.theta[jj], seq.phi[jj])));
    }
    return w;
}

std::pair<cplx, cplx> extract_pq(const AngleSequence &seq, double x) {
    const CMat w = evaluate_unitary(seq, x);
    return {w(0, 0), -w(0, 1)};
}

double expectation_z(const AngleSequence &seq, double x) {
    // W|0⟩ is the first column (P, Q*).
    const auto [p, q] = extract_pq(seq, x);
    return std::norm(p) - std::norm(q);
}

std::vector<double> expectation_grid(const AngleSequence &seq,
                                     std::span<const double> xs) {
    seq.validate();
    for (double x : xs) {
        check_signal(x);
    }
    std::vector<double> out(xs.size());
    kernels::expectation_batch(view_of(seq), xs, out);
    return out;
}

std::vector<double> training_grid(int layers) {
    return targets::periodic_grid(4 * layers + 4);
}

double loss_and_gradient(const AngleSequence &seq, const targets::TrigPoly &F,
                         std::span<const double> grid,
                         std::vector<double> *grad) {
    seq.validate();
    std::vector<double> ys(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ys[i] = F.eval_real(grid[i]);
    }
    if (grad != nullptr) {
        grad->assign(static_cast<std::size_t>(2 * seq.layers() + 3), 0.0);
        return kernels::loss_grad_batch(view_of(seq), grid, ys, *grad);
    }
    return kernels::loss_grad_batch(view_of(seq), grid, ys, {});
}

std::vector<double> loss_gradient(const AngleSequence &seq,
                                  const targets::TrigPoly &F,
                                  std::span<const double> grid) {
    std::vector<double> g;
    loss_and_gradient(seq, F, grid, &g);
    return g;
}

} // namespace qspforge::qsp
