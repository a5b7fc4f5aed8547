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
#include "qspforge/bench.hpp"
#include "qspforge/qppext.hpp"

using namespace qspforge;
using namespace qspforge::qpp;

namespace {

qsp::AngleSequence random_seq(int layers, RngStream &rng) {
    auto s = qsp::AngleSequence::identity(layers);
    s.omega = rng.uniform(-kPi, kPi);
    for (int j = 0; j <= layers; ++j) {
        s.theta[j] = rng.uniform(-kPi, kPi);
        s.phi[j] = rng.uniform(-kPi, kPi);
    }
    return s;
}

oracle::MX to_eigen(const CMat &m) {
    oracle::MX out(m.dim(), m.dim());
    for (int r = 0; r < m.dim(); ++r) {
        for (int c = 0; c < m.dim(); ++c) {
            out(r, c) = m(r, c);
        }
    }
    return out;
}

// V(U) from its definition, ancilla first in the tensor order.
oracle::MX qpp_oracle(const qsp::AngleSequence &s, const oracle::MX &u) {
    const auto d = u.rows();
    const oracle::MX id = oracle::MX::Identity(d, d);
    auto a = [&](int j) {
        const oracle::M2 g = oracle::ry(s.theta[j]) * oracle::rz(s.phi[j]);
        return oracle::kron(g, id);
    };
    oracle::MX cu_dag = oracle::MX::Zero(2 * d, 2 * d);
    cu_dag.topLeftCorner(d, d) = u.adjoint();
    cu_dag.bottomRightCorner(d, d) = id;
    oracle::MX cu = oracle::MX::Zero(2 * d, 2 * d);
    cu.topLeftCorner(d, d) = id;
    cu.bottomRightCorner(d, d) = u;
    oracle::MX v = oracle::kron(oracle::rz(s.omega), id) * a(0);
    for (int l = 1; 2 * l <= s.layers(); ++l) {
        v = v * cu_dag * a(2 * l - 1) * cu * a(2 * l);
    }
    return v;
}

qsp::AngleSequence trained_step_base(int pairs) {
    const auto F = bench::training_target(targets::make_target("step"), 2 * pairs,
                                          bench::SweepOptions::default_fourier());
    return qsp::train_angles(F, 2 * pairs, bench::SweepOptions::default_train(),
                             RngStream(1, 0))
        .seq;
}

} // namespace

TEST_CASE("circuit construction preconditions") {
    CHECK_THROWS_AS(QppCircuit(qsp::AngleSequence::identity(3), 1), PreconditionError);
    CHECK_THROWS_AS(QppCircuit(qsp::AngleSequence::identity(2), 0), PreconditionError);
    CHECK_THROWS_AS(QppCircuit(qsp::AngleSequence::identity(2), 4), PreconditionError);
    const QppCircuit c(qsp::AngleSequence::identity(4), 2);
    CHECK(c.pairs() == 2);
    CHECK(c.system_dim() == 4);
}

TEST_CASE("zero pairs act as the single head gate") {
    RngStream rng(1, 0);
    const auto s = random_seq(0, rng);
    const QppCircuit c(s, 2);
    const CMat u = random_unitary(4, rng);
    const CMat v = build_qpp_unitary(c, u);
    const CMat head = kron(qsp::a_gate(s.theta[0], s.phi[0]), CMat::identity(4));
    CHECK(max_abs_diff(v, matmul(kron(qsp::rz(s.omega), CMat::identity(4)), head)) < 1e-12);
}

TEST_CASE("dense unitary matches the definition") {
    RngStream rng(2, 0);
    for (int t = 0; t < 20; ++t) {
        const int n = 1 + t % 3;
        const auto s = random_seq(2 * (t % 4), rng);
        const QppCircuit c(s, n);
        const CMat u = random_unitary(1 << n, rng);
        const oracle::MX o = qpp_oracle(s, to_eigen(u));
        const CMat v = build_qpp_unitary(c, u);
        double diff = 0.0;
        for (int r = 0; r < v.dim(); ++r) {
            for (int k = 0; k < v.dim(); ++k) {
                diff = std::max(diff, std::abs(v(r, k) - o(r, k)));
            }
        }
        CHECK(diff < 1e-11);
        CHECK(unitarity_residual(v) < 1e-10);

        std::vector<cplx> psi(static_cast<std::size_t>(1 << n));
        double nrm = 0.0;
        for (auto &z : psi) {
            z = {rng.normal(), rng.normal()};
            nrm += std::norm(z);
        }
        for (auto &z : psi) {
            z /= std::sqrt(nrm);
        }
        std::vector<cplx> full(static_cast<std::size_t>(2 << n));
        std::copy(psi.begin(), psi.end(), full.begin());
        const auto ref = v.apply(full);
        const auto got = apply_qpp(c, u, psi);
        REQUIRE(got.size() == ref.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(std::abs(got[i] - ref[i]) < 1e-11);
        }
    }
}

TEST_CASE("reduction equals the doubled single-qubit circuit") {
    RngStream rng(3, 0);
    for (int t = 0; t < 50; ++t) {
        const auto s = random_seq(2 * (1 + t % 5), rng);
        const QppCircuit c(s, 1);
        const double tau = rng.uniform(0, kTwoPi);
        const CMat r = reduce_to_single_qubit(c, tau);
        const oracle::M2 o = oracle::circuit(s.omega, s.theta, s.phi, to_signed_phase(tau));
        double diff = 0.0;
        for (int i = 0; i < 2; ++i) {
            for (int k = 0; k < 2; ++k) {
                diff = std::max(diff, std::abs(r(i, k) - o(i, k)));
            }
        }
        CHECK(diff < 1e-11);
        CHECK(fhat(c, tau) == doctest::Approx(qsp::expectation_z(s, to_signed_phase(tau))));
    }
}

TEST_CASE("block diagonal in the eigenbasis for random unitaries") {
    RngStream rng(4, 0);
    for (int t = 0; t < 60; ++t) {
        const int n = 1 + t % 3;
        const QppCircuit c(random_seq(2 * (1 + t % 4), rng), n);
        CHECK(block_residual(c, random_unitary(1 << n, rng)) < 1e-9);
    }
}

TEST_CASE("err_ext examples") {
    RngStream rng(5, 0);
    const auto f = targets::make_target("selu");
    const QppCircuit c(random_seq(6, rng), 2);
    const std::vector<cplx> d{1.0, kI, -1.0, -kI};
    const auto rep = err_ext(c, CMat::diagonal(d), f);
    REQUIRE(rep.records.size() == 4);
    double worst = 0.0;
    for (const auto &r : rep.records) {
        const double x = to_signed_phase(r.tau);
        CHECK(r.f == doctest::Approx(f(x)));
        CHECK(r.fhat == doctest::Approx(qsp::expectation_z(c.base(), x)));
        worst = std::max(worst, (r.f - r.fhat) * (r.f - r.fhat));
    }
    CHECK(rep.err_ext == doctest::Approx(worst));

    const QppCircuit id(qsp::AngleSequence::identity(2), 1);
    const auto one = targets::custom_target("one", [](double) { return 1.0; });
    CHECK(err_ext(id, random_unitary(2, rng), one).err_ext < 1e-20);
    CHECK(err_qsp(id, one) < 1e-20);
    const double want = oracle::integrate([&](double x) {
        const double e = f(x) - 1.0;
        return e * e;
    }, -kPi, kPi);
    CHECK(err_qsp(id, f, 20000) == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("signed phase mapping") {
    CHECK(to_signed_phase(0.0) == 0.0);
    CHECK(to_signed_phase(kPi / 2) == doctest::Approx(kPi / 2));
    CHECK(to_signed_phase(3 * kPi / 2) == doctest::Approx(-kPi / 2));
    CHECK(circular_distance(0.01, kTwoPi - 0.01) == doctest::Approx(0.02));
}

TEST_CASE("phase estimation with a trained step circuit") {
    const QppCircuit c(trained_step_base(60), 1);
    const double delta = kTwoPi / 256;
    CHECK(qpe_rounds(delta) == 8);
    const std::vector<cplx> d{1.0, kI};
    const CMat u = CMat::diagonal(d);
    RngStream rng(7, 0);
    int ok = 0;
    for (int t = 0; t < 10; ++t) {
        const auto r = qpe_binary_search(u, std::vector<cplx>{0.0, 1.0}, delta, c, 15, rng);
        CHECK(r.queries == 15 * 8);
        CHECK(r.controlled_calls == 15L * 8 * 120);
        ok += circular_distance(r.estimate, kPi / 2) <= delta ? 1 : 0;
    }
    CHECK(ok >= 9);
    int ok0 = 0;
    for (int t = 0; t < 10; ++t) {
        const auto r = qpe_binary_search(u, std::vector<cplx>{1.0, 0.0}, delta, c, 15, rng);
        ok0 += circular_distance(r.estimate, 0.0) <= delta ? 1 : 0;
    }
    CHECK(ok0 >= 9);
}

TEST_CASE("phase estimation preconditions") {
    const QppCircuit c(qsp::AngleSequence::identity(2), 1);
    const CMat u = CMat::diagonal(std::vector<cplx>{1.0, kI});
    RngStream rng(8, 0);
    const double s = 1 / std::sqrt(2.0);
    CHECK_THROWS_AS(qpe_binary_search(u, std::vector<cplx>{s, s}, 0.1, c, 5, rng),
                    PreconditionError);
    CHECK_THROWS_AS(qpe_binary_search(u, std::vector<cplx>{1.0, 0.0}, 0.1, c, 0, rng),
                    PreconditionError);
    CHECK_THROWS_AS(qpe_rounds(0.0), PreconditionError);
    CHECK(qpe_rounds(kTwoPi) == 1);
}
