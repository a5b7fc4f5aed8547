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

#include <cmath>

#include "oracle/oracle.hpp"
#include "qspforge/numkit.hpp"
#include "qspforge/qspcore.hpp"

using namespace qspforge;

TEST_CASE("matmul identities") {
    const CMat id = CMat::identity(2);
    CHECK(max_abs_diff(matmul(id, id), id) == 0.0);
    const CMat z{{1.0, 0.0}, {0.0, -1.0}};
    CHECK(max_abs_diff(matmul(z, z), id) < 1e-15);
    const CMat half = qsp::ry(kPi / 2);
    CHECK(max_abs_diff(matmul(half, half), qsp::ry(kPi)) < 1e-12);
    CHECK_THROWS_AS(matmul(CMat::identity(2), CMat::identity(4)), DimensionError);
}

TEST_CASE("matmul agrees with Eigen on random matrices") {
    RngStream rng(5, 0);
    for (int dim : {1, 2, 3, 8}) {
        CMat a(dim), b(dim);
        oracle::MX ea(dim, dim), eb(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                a(r, c) = {rng.normal(), rng.normal()};
                b(r, c) = {rng.normal(), rng.normal()};
                ea(r, c) = a(r, c);
                eb(r, c) = b(r, c);
            }
        }
        const CMat p = matmul(a, b);
        const oracle::MX ep = ea * eb;
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                CHECK(std::abs(p(r, c) - ep(r, c)) < 1e-12);
            }
        }
    }
}

TEST_CASE("kron layout puts the first factor on the high index") {
    const CMat x{{0.0, 1.0}, {1.0, 0.0}};
    const CMat k = kron(x, CMat::identity(2));
    CHECK(k(0, 2) == cplx(1.0));
    CHECK(k(1, 3) == cplx(1.0));
    CHECK(k(0, 1) == cplx(0.0));
}

TEST_CASE("eig_unitary examples") {
    auto id = eig_unitary(CMat::identity(3));
    for (const auto &p : id) {
        CHECK(std::abs(p.phase) < 1e-12);
    }
    const std::vector<cplx> d{1.0, std::polar(1.0, kPi / 2)};
    auto pairs = eig_unitary(CMat::diagonal(d));
    std::vector<double> ph{pairs[0].phase, pairs[1].phase};
    std::sort(ph.begin(), ph.end());
    CHECK(std::abs(ph[0]) < 1e-12);
    CHECK(std::abs(ph[1] - kPi / 2) < 1e-12);
}

TEST_CASE("eig_unitary reconstructs Haar unitaries with orthonormal vectors") {
    RngStream rng(9, 1);
    for (int t = 0; t < 60; ++t) {
        const int dim = 1 + t % 16;
        const CMat u = random_unitary(dim, rng);
        REQUIRE(unitarity_residual(u) < 1e-12);
        const auto pairs = eig_unitary(u);
        CHECK(max_abs_diff(reconstruct(pairs), u) < 1e-8);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            CHECK(pairs[i].phase >= 0.0);
            CHECK(pairs[i].phase < kTwoPi);
            for (std::size_t j = 0; j < pairs.size(); ++j) {
                cplx ip{};
                for (int s = 0; s < dim; ++s) {
                    ip += std::conj(pairs[i].vector[s]) * pairs[j].vector[s];
                }
                CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-8);
            }
        }
    }
}

TEST_CASE("eig_unitary handles degenerate spectra") {
    RngStream rng(2, 2);
    const CMat q = random_unitary(4, rng);
    const std::vector<cplx> d{1.0, 1.0, std::polar(1.0, 2.0), std::polar(1.0, 2.0)};
    const CMat u = matmul(matmul(q, CMat::diagonal(d)), q.adjoint());
    const auto pairs = eig_unitary(u);
    CHECK(max_abs_diff(reconstruct(pairs), u) < 1e-8);
}

TEST_CASE("eig_unitary rejects non-unitary input") {
    CMat m{{1.0, 1.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(eig_unitary(m), PreconditionError);
}

TEST_CASE("density predicates") {
    const CMat plus{{0.5, 0.5}, {0.5, 0.5}};
    CHECK(is_density(plus, 1e-9));
    CHECK(is_hermitian(plus, 1e-12));
    const CMat neg{{1.5, 0.0}, {0.0, -0.5}};
    CHECK_FALSE(is_density(neg, 1e-9));
    CHECK(min_hermitian_eigenvalue(neg) == doctest::Approx(-0.5));
}

TEST_CASE("RngStream is reproducible and stream ids separate") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    bool all_same = true;
    bool any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const auto va = a.next_u64();
        all_same = all_same && va == b.next_u64();
        any_diff = any_diff || va != c.next_u64();
    }
    CHECK(all_same);
    CHECK(any_diff);
    RngStream s1 = RngStream(1, 0).substream(3);
    RngStream s2 = RngStream(1, 0).substream(3);
    CHECK(s1.uniform() == s2.uniform());
}

TEST_CASE("RngStream uniform and normal moments") {
    RngStream r(3, 3);
    double s = 0, s2 = 0, n = 0, n2 = 0;
    const int count = 200000;
    for (int i = 0; i < count; ++i) {
        const double u = r.uniform();
        CHECK_FALSE((u < 0.0 || u >= 1.0));
        s += u;
        s2 += u * u;
        const double g = r.normal();
        n += g;
        n2 += g * g;
    }
    CHECK(s / count == doctest::Approx(0.5).epsilon(0.01));
    CHECK(s2 / count - std::pow(s / count, 2) == doctest::Approx(1.0 / 12).epsilon(0.02));
    CHECK(std::abs(n / count) < 0.01);
    CHECK(n2 / count == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("phase-aligned distance ignores global phase") {
    RngStream r(4, 0);
    const CMat u = random_unitary(3, r);
    CMat v = u;
    v *= std::polar(1.0, 1.234);
    CHECK(phase_aligned_distance(u, v) < 1e-12);
    CHECK(max_abs_diff(u, v) > 0.1);
}
