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
#include "qspforge/targets.hpp"

using namespace qspforge;
using namespace qspforge::targets;

TEST_CASE("pointwise target values") {
    CHECK(eval_step(0.5) == 1.0);
    CHECK(eval_step(-0.5) == -1.0);
    CHECK(eval_step(0.0) == 1.0);
    CHECK(eval_step_surrogate(0.0, 7.0) == 0.0);
    CHECK(eval_step_surrogate(kPi, 100.0) == doctest::Approx(0.99797).epsilon(1e-5));
    CHECK(std::abs(eval_step_surrogate(0.1, 1e4) - 1.0) < 1e-2);
    CHECK(eval_selu(kPi) == doctest::Approx(1.0));
    CHECK(eval_selu(0.0) == 0.0);
    CHECK(eval_selu(-kPi) == doctest::Approx(-0.509613).epsilon(1e-5));
    CHECK(eval_relu(-1.0) == 0.0);
    CHECK(eval_relu(kPi) == doctest::Approx(1.0));
    CHECK(eval_relu(kPi / 2) == doctest::Approx(0.5));
}

TEST_CASE("targets reject out-of-domain inputs") {
    CHECK_THROWS_AS(eval_step(3.5), DomainError);
    CHECK_THROWS_AS(eval_selu(-4.0), DomainError);
    CHECK_THROWS_AS(eval_relu(NAN), DomainError);
    CHECK_THROWS_AS(eval_step_surrogate(0.1, -1.0), DomainError);
    CHECK_THROWS_AS(make_target("nope"), DomainError);
    CHECK_THROWS_AS(custom_target("big", [](double x) { return 2 * std::cos(x); }), DomainError);
}

TEST_CASE("fourier_truncate examples") {
    const auto c = fourier_truncate(make_target("cos"), 1);
    CHECK(std::abs(c.coeff(1) - 0.5) < 1e-10);
    CHECK(std::abs(c.coeff(-1) - 0.5) < 1e-10);
    CHECK(std::abs(c.coeff(0)) < 1e-10);
    FourierOptions raw;
    raw.normalize = false;
    for (int L : {0, 3, 10}) {
        const auto r = fourier_truncate(make_target("relu"), L, raw);
        CHECK(std::abs(r.coeff(0) - 0.25) < 1e-6);
    }
    const auto sq = fourier_coefficients(make_target("step", 1e4), 1, default_quadrature_points(1));
    CHECK(std::abs(std::abs(sq[1]) - 2 / kPi) < 1e-3);
    CHECK_THROWS_AS(fourier_coefficients(make_target("selu"), 10, 80), PreconditionError);
}

TEST_CASE("fourier coefficients match a Gauss-Legendre oracle") {
    for (const char *name : {"selu", "relu", "step"}) {
        const auto f = make_target(name);
        const auto got = fourier_coefficients(f, 12, 1 << 16);
        for (int k = 0; k <= 12; ++k) {
            const auto want = oracle::fourier_coeff([&](double x) { return f(x); }, k, {0.0});
            CHECK(std::abs(got[k] - want) < 1e-6);
        }
    }
}

TEST_CASE("truncations are real valued and bounded") {
    for (const char *name : {"selu", "relu", "step", "step_hard"}) {
        for (int L : {1, 7, 30}) {
            for (auto filter : {GibbsFilter::None, GibbsFilter::Lanczos}) {
                FourierOptions o;
                o.filter = filter;
                const auto p = fourier_truncate(make_target(name), L, o);
                CHECK(p.is_real_valued());
                double imag = 0.0;
                for (double x : midpoint_grid(1000)) {
                    imag = std::max(imag, std::abs(p.eval(x).imag()));
                }
                CHECK(imag < 1e-9);
                CHECK(p.sup_abs() <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("sup_abs finds off-grid peaks") {
    // cos(3x) + cos(5x) peaks at 0; shifted so the peak is off any simple grid.
    TrigPoly p(5, std::vector<cplx>(11));
    p.set_coeff(3, 0.5 * std::polar(1.0, -0.37 * 3));
    p.set_coeff(-3, 0.5 * std::polar(1.0, 0.37 * 3));
    p.set_coeff(5, 0.5 * std::polar(1.0, -0.37 * 5));
    p.set_coeff(-5, 0.5 * std::polar(1.0, 0.37 * 5));
    CHECK(p.sup_abs() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("parseval floor examples and monotonicity") {
    const auto c = make_target("cos");
    CHECK(std::abs(parseval_floor(c, 1, 4)) < 1e-10);
    CHECK(std::abs(parseval_floor(c, 0, 4) - kPi) < 1e-8);
    const auto s = make_target("selu");
    CHECK(parseval_floor(s, 120, 480) < parseval_floor(s, 15, 480));
    double prev = INFINITY;
    for (int L : {0, 5, 15, 30, 60}) {
        const double fl = parseval_tail(s, L);
        CHECK(fl <= prev);
        CHECK(fl >= parseval_floor(s, L, 4 * L + 4) - 1e-9);
        prev = fl;
    }
    CHECK_THROWS_AS(parseval_floor(s, 10, 20), PreconditionError);
}

TEST_CASE("parseval tail agrees with the direct L2 distance") {
    const auto f = make_target("selu");
    for (int L : {5, 15}) {
        FourierOptions o;
        o.normalize = false;
        const auto p = fourier_truncate(f, L, o);
        const double want = oracle::integrate(
            [&](double x) { return std::pow(f(x) - p.eval_real(x), 2); }, -kPi, kPi, 20000);
        CHECK(parseval_tail(f, L) == doctest::Approx(want).epsilon(1e-4));
    }
}

TEST_CASE("Fourier convergence for SELU and ReLU") {
    for (const char *name : {"selu", "relu"}) {
        const auto f = make_target(name);
        double prev = INFINITY;
        for (int L : {15, 30, 60, 120}) {
            FourierOptions o;
            o.normalize = false;
            const auto p = fourier_truncate(f, L, o);
            double acc = 0.0;
            const auto xs = midpoint_grid(1000);
            for (double x : xs) {
                acc += std::pow(p.eval_real(x) - f(x), 2);
            }
            acc /= xs.size();
            CHECK(acc < prev);
            prev = acc;
        }
    }
}

TEST_CASE("Gibbs overshoot of the hard step persists") {
    const auto f = make_target("step_hard");
    for (int L : {15, 30, 60, 120}) {
        FourierOptions o;
        o.normalize = false;
        const auto p = fourier_truncate(f, L, o);
        double worst = 0.0;
        for (int i = 1; i <= 2000; ++i) {
            const double x = 0.5 * i / 2000.0;
            worst = std::max(worst, std::abs(p.eval_real(x) - 1.0));
        }
        CHECK(worst > 0.05);
    }
}

TEST_CASE("grids") {
    const auto m = midpoint_grid(4);
    CHECK(m[0] == doctest::Approx(-kPi + kPi / 4));
    const auto p = periodic_grid(4);
    CHECK(p[0] == -kPi);
    CHECK(p[3] == doctest::Approx(kPi / 2));
}
