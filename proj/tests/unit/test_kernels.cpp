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

#include <doctest.h>

#include <cstdlib>

#include "qspforge/kernels.hpp"
#include "qspforge/numkit.hpp"

using namespace qspforge;
using namespace qspforge::kernels;

namespace {

struct Circuit {
    double omega;
    std::vector<double> theta, phi;
    [[nodiscard]] CircuitView view() const { return {omega, theta, phi}; }
};

Circuit random_circuit(int layers, RngStream &rng) {
    Circuit c{rng.uniform(-3, 3), {}, {}};
    for (int j = 0; j <= layers; ++j) {
        c.theta.push_back(rng.uniform(-4, 4));
        c.phi.push_back(rng.uniform(-4, 4));
    }
    return c;
}

} // namespace

TEST_CASE("scalar and AVX2 kernels agree") {
    if (!isa_supported(Isa::Avx2)) {
        MESSAGE("AVX2 not available; skipping equivalence");
        return;
    }
    RngStream rng(17, 0);
    for (int layers : {0, 1, 2, 7, 40, 121}) {
        // Sizes that exercise the masked tail lanes.
        for (int n : {1, 3, 4, 5, 8, 13, 64}) {
            const Circuit c = random_circuit(layers, rng);
            std::vector<double> xs(n), ys(n);
            for (int i = 0; i < n; ++i) {
                xs[i] = rng.uniform(-kPi, kPi);
                ys[i] = rng.uniform(-1, 1);
            }
            std::vector<double> zs(n), za(n);
            scalar::expectation_batch(c.view(), xs, zs);
            avx2::expectation_batch(c.view(), xs, za);
            for (int i = 0; i < n; ++i) {
                CHECK(std::abs(zs[i] - za[i]) < 1e-12);
            }
            const std::size_t np = 2 * layers + 3;
            std::vector<double> gs(np), ga(np);
            const double ls = scalar::loss_grad_batch(c.view(), xs, ys, gs);
            const double la = avx2::loss_grad_batch(c.view(), xs, ys, ga);
            CHECK(std::abs(ls - la) < 1e-12);
            for (std::size_t k = 0; k < np; ++k) {
                CHECK(std::abs(gs[k] - ga[k]) < 1e-10);
            }
            CHECK(scalar::loss_grad_batch(c.view(), xs, ys, {}) == doctest::Approx(ls).epsilon(1e-14));
        }
    }
}

TEST_CASE("dispatch honours force_isa") {
    const Isa before = active_isa();
    force_isa(Isa::Scalar);
    CHECK(active_isa() == Isa::Scalar);
    CHECK(isa_name(Isa::Scalar) == "scalar");
    if (isa_supported(Isa::Avx2)) {
        force_isa(Isa::Avx2);
        CHECK(active_isa() == Isa::Avx2);
    }
    force_isa(before);
}

TEST_CASE("omega gradient vanishes in both kernels") {
    RngStream rng(3, 1);
    const Circuit c = random_circuit(5, rng);
    std::vector<double> xs{-1.0, 0.2, 0.9, 2.5, 3.0}, ys{0.1, -0.2, 0.3, 0.0, 0.5};
    std::vector<double> g(13);
    scalar::loss_grad_batch(c.view(), xs, ys, g);
    CHECK(std::abs(g[0]) < 1e-12);
    if (isa_supported(Isa::Avx2)) {
        avx2::loss_grad_batch(c.view(), xs, ys, g);
        CHECK(std::abs(g[0]) < 1e-12);
    }
}
