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
#include <array>
#include <bit>
#include <cmath>

#include "qspforge/pulselab.hpp"

namespace qspforge::pulse {

namespace {

// ρ flattened row-major: (ρ00, ρ01, ρ10, ρ11).
using Vec4 = std::array<cplx, 4>;
using Mat4 = std::array<cplx, 16>;

Vec4 flatten(const CMat &rho) {
    return {rho(0, 0), rho(0, 1), rho(1, 0), rho(1, 1)};
}

CMat unflatten(const Vec4 &v) { return CMat{{v[0], v[1]}, {v[2], v[3]}}; }

Mat4 mul(const Mat4 &a, const Mat4 &b) {
    Mat4 c{};
    for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 4; ++k) {
            const cplx aik = a[static_cast<std::size_t>(4 * i + k)];
            for (int j = 0; j < 4; ++j) {
                c[static_cast<std::size_t>(4 * i + j)] +=
                    aik * b[static_cast<std::size_t>(4 * k + j)];
            }
        }
    }
    return c;
}

// Generator G of dρ/dt = Gρ for drive amplitude rabi (0 = idle) and phase.
Mat4 generator(double rabi, double phase, double deph) {
    const cplx h = 0.5 * rabi * std::polar(1.0, phase);
    const cplx hc = std::conj(h);
    const cplx mi = -kI;
    Mat4 g{};
    auto at = [&g](int r, int c) -> cplx & {
        return g[static_cast<std::size_t>(4 * r + c)];
    };
    // -i[H, ρ]
    at(0, 2) += mi * h;
    at(0, 1) -= mi * hc;
    at(1, 3) += mi * h;
    at(1, 0) -= mi * h;
    at(2, 0) += mi * hc;
    at(2, 3) -= mi * hc;
    at(3, 1) += mi * hc;
    at(3, 2) -= mi * h;
    // (D/2)(2PρP - Pρ - ρP), P = |e⟩⟨e|
    at(1, 1) -= 0.5 * deph;
    at(2, 2) -= 0.5 * deph;
    return g;
}

// One classical RK4 step of a linear autonomous system is the degree-4
// Taylor polynomial of exp(hG).
Mat4 rk4_propagator(const Mat4 &g, double h) {
    Mat4 hg = g;
    for (auto &v : hg) {
        v *= h;
    }
    Mat4 s{};
    Mat4 term{};
    for (int i = 0; i < 4; ++i) {
        s[static_cast<std::size_t>(5 * i)] = 1.0;
        term[static_cast<std::size_t>(5 * i)] = 1.0;
    }
    for (int m = 1; m <= 4; ++m) {
        term = mul(term, hg);
        for (std::size_t i = 0; i < 16; ++i) {
            term[i] /= static_cast<double>(m);
            s[i] += term[i];
        }
        // term now holds (hG)^m / m!
    }
    return s;
}

Vec4 step(const Mat4 &s, const Vec4 &v) {
    Vec4 o{};
    for (std::size_t i = 0; i < 4; ++i) {
        o[i] = s[4 * i] * v[0] + s[4 * i + 1] * v[1] + s[4 * i + 2] * v[2] +
               s[4 * i + 3] * v[3];
    }
    return o;
}

double coherence_of(const Vec4 &v) { return std::abs(v[1]) + std::abs(v[2]); }

void check_step(const NoiseSpec &spec, double dt) {
    spec.validate();
    if (!(dt > 0.0) || dt > spec.pi_time() / 100.0 * (1.0 + 1e-12)) {
        throw PreconditionError("integrator step must satisfy 0 < dt <= (pi/rabi)/100");
    }
}

// Evolve v for `duration` under generator g using steps no longer than dt.
Vec4 integrate(Vec4 v, const Mat4 &g, double duration, double dt) {
    if (duration <= 0.0) {
        return v;
    }
    const auto n = static_cast<long>(std::max(1.0, std::ceil(duration / dt - 1e-9)));
    const Mat4 s = rk4_propagator(g, duration / static_cast<double>(n));
    for (long i = 0; i < n; ++i) {
        v = step(s, v);
    }
    return v;
}

double min_eig2(const CMat &m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double half = 0.5 * (a - d);
    return 0.5 * (a + d) - std::sqrt(half * half + std::norm(m(0, 1)));
}

} // namespace

DensityMatrix::DensityMatrix(CMat rho) : rho_(std::move(rho)) {
    if (rho_.dim() != 2) {
        throw DimensionError("density matrix must be 2x2");
    }
}

DensityMatrix DensityMatrix::ground() {
    return DensityMatrix(CMat{{0.0, 0.0}, {0.0, 1.0}});
}

DensityMatrix DensityMatrix::maximally_mixed() {
    return DensityMatrix(CMat{{0.5, 0.0}, {0.0, 0.5}});
}

DensityMatrix DensityMatrix::pure(std::span<const cplx> psi) {
    if (psi.size() != 2) {
        throw DimensionError("pure state must have 2 amplitudes");
    }
    const double n = std::norm(psi[0]) + std::norm(psi[1]);
    if (std::abs(n - 1.0) > 1e-9) {
        throw PreconditionError("pure state must be normalized");
    }
    CMat r(2);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            r(i, j) = psi[static_cast<std::size_t>(i)] *
                      std::conj(psi[static_cast<std::size_t>(j)]);
        }
    }
    return DensityMatrix(std::move(r));
}

void DensityMatrix::validate() const {
    const auto &pol = numeric_policy();
    for (const auto &v : rho_.entries()) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw InvariantError("density matrix has non-finite entries");
        }
    }
    if (std::abs(rho_.trace() - 1.0) > pol.density_trace_tol) {
        throw InvariantError("density matrix trace drifted from 1");
    }
    if (!is_hermitian(rho_, pol.density_herm_tol)) {
        throw InvariantError("density matrix lost Hermiticity");
    }
    if (min_eig2(rho_) < pol.density_min_eig) {
        throw InvariantError("density matrix has a negative eigenvalue");
    }
}

double DensityMatrix::z_expectation() const {
    return rho_(1, 1).real() - rho_(0, 0).real();
}

double DensityMatrix::excited_population() const { return rho_(0, 0).real(); }

double default_step(const NoiseSpec &spec) { return spec.pi_time() / 200.0; }

DensityMatrix lindblad_evolve(const DensityMatrix &rho, const Pulse &p,
                              const NoiseSpec &spec, double dt) {
    check_step(spec, dt);
    if (!(p.duration >= 0.0) || !(p.rabi > 0.0)) {
        throw PreconditionError("pulse needs duration >= 0 and rabi > 0");
    }
    if (p.rabi > spec.rabi * (1.0 + 1e-12)) {
        throw PreconditionError("pulse rabi exceeds the step-size reference");
    }
    DensityMatrix out(unflatten(integrate(
        flatten(rho.matrix()), generator(p.rabi, p.phase, spec.dephasing),
        p.duration, dt)));
    out.validate();
    return out;
}

DensityMatrix free_evolve(const DensityMatrix &rho, double duration,
                          const NoiseSpec &spec, double dt) {
    check_step(spec, dt);
    if (!(duration >= 0.0)) {
        throw PreconditionError("duration must be >= 0");
    }
    DensityMatrix out(unflatten(integrate(flatten(rho.matrix()),
                                          generator(0.0, 0.0, spec.dephasing),
                                          duration, dt)));
    out.validate();
    return out;
}

double coherence(const DensityMatrix &rho, const NoiseSpec &spec,
                 const CoherenceOptions &opts) {
    spec.validate();
    if (opts.samples < 1 || !(opts.window_periods >= 0.0)) {
        throw PreconditionError("coherence window needs samples >= 1");
    }
    const double dt = default_step(spec);
    const double window = opts.window_periods * kTwoPi / spec.rabi;
    const double drive = opts.window == CoherenceWindow::Driven ? spec.rabi : 0.0;
    const Mat4 g = generator(drive, 0.0, spec.dephasing);
    const double chunk = window / opts.samples;
    Vec4 v = flatten(rho.matrix());
    double best = coherence_of(v);
    for (int s = 0; s < opts.samples; ++s) {
        v = integrate(v, g, chunk, dt);
        best = std::max(best, coherence_of(v));
    }
    return best;
}

NoisyRun run_noisy_qsp(const qsp::AngleSequence &seq, double x,
                       const NoiseSpec &spec, const NoisyRunOptions &opts) {
    PulseSequence prog = compile_circuit(seq, x, spec);
    const double dt = opts.dt > 0.0 ? opts.dt : default_step(spec);
    check_step(spec, dt);
    if (spec.jitter_sigma > 0.0) {
        RngStream rng(spec.jitter_seed, std::bit_cast<std::uint64_t>(x));
        for (auto &p : prog.pulses) {
            p.duration = std::max(0.0, p.duration * (1.0 + spec.jitter_sigma * rng.normal()));
        }
    }

    NoisyRun run;
    run.pulse_count = static_cast<int>(prog.pulses.size());
    DensityMatrix rho = DensityMatrix::ground();
    double elapsed = 0.0;
    for (std::size_t i = 0; i < prog.pulses.size(); ++i) {
        const Pulse &p = prog.pulses[i];
        rho = lindblad_evolve(rho, p, spec, dt);
        elapsed += p.duration;
        const bool layer_done = i + 1 == prog.pulses.size() ||
                                prog.pulses[i + 1].layer != p.layer;
        if (opts.record_coherence && layer_done) {
            run.layers.push_back(
                {p.layer, elapsed, coherence(rho, spec, opts.coherence)});
        }
    }
    run.total_time = elapsed;
    run.expectation = rho.z_expectation();
    return run;
}

std::vector<double> free_coherence_trace(std::span<const double> times,
                                         const NoiseSpec &spec,
                                         const CoherenceOptions &opts) {
    const double dt = default_step(spec);
    const double r = 1.0 / std::sqrt(2.0);
    const std::array<cplx, 2> plus{r, r};
    DensityMatrix rho = DensityMatrix::pure(plus);
    std::vector<double> out;
    out.reserve(times.size());
    double now = 0.0;
    for (double t : times) {
        if (t < now) {
            throw PreconditionError("trace times must be non-decreasing");
        }
        rho = free_evolve(rho, t - now, spec, dt);
        now = t;
        out.push_back(coherence(rho, spec, opts));
    }
    return out;
}

} // namespace qspforge::pulse
