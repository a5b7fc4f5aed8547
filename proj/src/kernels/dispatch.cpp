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
#include <cstdlib>
#include <string>

#include "qspforge/errors.hpp"
#include "qspforge/kernels.hpp"

namespace qspforge::kernels {

#ifndef QSPFORGE_HAVE_AVX2
namespace avx2 {
void expectation_batch(const CircuitView &, std::span<const double>,
                       std::span<double>) {
    throw PreconditionError("avx2 kernels not compiled for this target");
}
double loss_grad_batch(const CircuitView &, std::span<const double>,
                       std::span<const double>, std::span<double>) {
    throw PreconditionError("avx2 kernels not compiled for this target");
}
} // namespace avx2
#endif

namespace {

struct Dispatch {
    Isa isa;
    ExpectationFn expectation;
    LossGradFn loss_grad;
};

Dispatch make_dispatch(Isa isa) {
    if (isa == Isa::Avx2) {
        return {Isa::Avx2, &avx2::expectation_batch, &avx2::loss_grad_batch};
    }
    return {Isa::Scalar, &scalar::expectation_batch, &scalar::loss_grad_batch};
}

Dispatch initial_dispatch() {
    Isa isa = isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
    if (const char *env = std::getenv("QSPFORGE_SIMD")) {
        const std::string v(env);
        if (v == "scalar") {
            isa = Isa::Scalar;
        } else if (v == "avx2" && isa_supported(Isa::Avx2)) {
            isa = Isa::Avx2;
        }
    }
    return make_dispatch(isa);
}

Dispatch &dispatch() {
    static Dispatch d = initial_dispatch();
    return d;
}

} // namespace

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
#if defined(QSPFORGE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

Isa active_isa() noexcept { return dispatch().isa; }

void force_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw PreconditionError(std::string("force_isa: CPU lacks ") +
                                std::string(isa_name(isa)));
    }
    dispatch() = make_dispatch(isa);
}

std::string_view isa_name(Isa isa) noexcept {
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

void expectation_batch(const CircuitView &c, std::span<const double> xs,
                       std::span<double> out) {
    dispatch().expectation(c, xs, out);
}

double loss_grad_batch(const CircuitView &c, std::span<const double> xs,
                       std::span<const double> ys, std::span<double> grad) {
    return dispatch().loss_grad(c, xs, ys, grad);
}

} // namespace qspforge::kernels
