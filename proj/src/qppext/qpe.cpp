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

int qpe_rounds(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw PreconditionError("QPE precision must be > 0");
    }
    // Guard against log2(2π/δ) landing a few ulps above an integer.
    const double r = std::log2(kTwoPi / delta);
    return std::max(1, static_cast<int>(std::ceil(r - 1e-12)));
}

double circular_distance(double a, double b) {
    return std::abs(to_signed_phase(a - b));
}

QpeResult qpe_binary_search(const CMat &u, std::span<const cplx> eigenstate,
                            double delta, const QppCircuit &c_step, int shots,
                            RngStream &rng) {
    const int rounds = qpe_rounds(delta);
    if (shots < 1) {
        throw PreconditionError("QPE needs at least one shot per round");
    }
    const int d = c_step.system_dim();
    if (u.dim() != d || eigenstate.size() != static_cast<std::size_t>(d)) {
        throw DimensionError("QPE signal / eigenstate dimension mismatch");
    }
    const auto upsi = u.apply(eigenstate);
    cplx lambda{};
    double norm = 0.0;
    for (int i = 0; i < d; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        lambda += std::conj(eigenstate[iu]) * upsi[iu];
        norm += std::norm(eigenstate[iu]);
    }
    if (std::abs(norm - 1.0) > 1e-8) {
        throw PreconditionError("QPE eigenstate must be normalized");
    }
    double resid = 0.0;
    for (int i = 0; i < d; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        resid = std::max(resid, std::abs(upsi[iu] - lambda * eigenstate[iu]));
    }
    if (resid > 1e-8) {
        throw PreconditionError("QPE input is not an eigenvector of U");
    }

    // Sign of f̂(τ - m) decides whether τ lies ahead of m on the circle.
    auto ahead = [&](double m) {
        CMat shifted = u;
        shifted *= std::polar(1.0, -m);
        const auto out = apply_qpp(c_step, shifted, eigenstate);
        double p0 = 0.0;
        for (int i = 0; i < d; ++i) {
            p0 += std::norm(out[static_cast<std::size_t>(i)]);
        }
        p0 = std::clamp(p0, 0.0, 1.0);
        int zeros = 0;
        for (int s = 0; s < shots; ++s) {
            zeros += rng.bernoulli(p0) ? 1 : 0;
        }
        return 2 * zeros > shots;
    };

    QpeResult res;
    const double m0 = rng.uniform(kTwoPi / 3, 2 * kTwoPi / 3);
    double lo = ahead(m0) ? m0 : m0 - kPi;
    double width = kPi;
    for (int r = 1; r < rounds; ++r) {
        const double m = lo + 0.5 * width;
        if (ahead(m)) {
            lo = m;
        }
        width *= 0.5;
    }
    lo = std::fmod(lo, kTwoPi);
    if (lo < 0.0) {
        lo += kTwoPi;
    }
    res.lo = lo;
    res.width = width;
    res.estimate = std::fmod(lo + 0.5 * width, kTwoPi);
    res.rounds = rounds;
    res.queries = static_cast<long>(shots) * rounds;
    res.controlled_calls = res.queries * 2L * c_step.pairs();
    return res;
}

} // namespace qspforge::qpp
