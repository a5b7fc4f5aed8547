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
#include <cstdio>
#include <ostream>

#include "qspforge/pulselab.hpp"

namespace qspforge::pulse {

DensityMatrix toy_dephasing_step(cplx p_n, cplx q_n, double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw DomainError("angles must be finite");
    }
    const double pp = std::norm(p_n);
    const double qq = std::norm(q_n);
    if (std::abs(pp + qq - 1.0) > 1e-9) {
        throw PreconditionError("|P|^2 + |Q|^2 must equal 1");
    }
    // Rz(φ) only rephases and is erased by the full dephasing.
    const double c2 = std::pow(std::cos(0.5 * theta), 2);
    const double s2 = std::pow(std::sin(0.5 * theta), 2);
    return DensityMatrix(CMat{{c2 * pp + s2 * qq, 0.0}, {0.0, s2 * pp + c2 * qq}});
}

std::vector<double> ramsey_phases(int n) {
    if (n < 8) {
        throw PreconditionError("ramsey scan needs at least 8 phases");
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = kTwoPi * k / n;
    }
    return out;
}

double ramsey_contrast(double delay, const NoiseSpec &spec,
                       std::span<const double> phases) {
    spec.validate();
    if (!(delay >= 0.0) || !std::isfinite(delay)) {
        throw PreconditionError("ramsey delay must be finite and >= 0");
    }
    if (phases.size() < 8) {
        throw PreconditionError("ramsey scan needs at least 8 phases");
    }
    const double half = 0.5 * spec.pi_time();
    auto kick = [&](const CMat &rho, double phase) {
        const CMat u = pulse_unitary({phase, half, spec.rabi, 0});
        return matmul(matmul(u, rho), u.adjoint());
    };
    DensityMatrix rho(kick(DensityMatrix::ground().matrix(), 0.0));
    rho = free_evolve(rho, delay, spec, default_step(spec));
    double lo = 1.0;
    double hi = 0.0;
    for (double ph : phases) {
        const double pe = kick(rho.matrix(), ph)(0, 0).real();
        lo = std::min(lo, pe);
        hi = std::max(hi, pe);
    }
    return hi + lo > 0.0 ? (hi - lo) / (hi + lo) : 0.0;
}

double fit_decay_rate(std::span<const double> delays,
                      std::span<const double> contrasts) {
    if (delays.size() != contrasts.size() || delays.size() < 2) {
        throw PreconditionError("decay fit needs >= 2 matching samples");
    }
    double st = 0, sy = 0, stt = 0, sty = 0;
    const auto n = static_cast<double>(delays.size());
    for (std::size_t i = 0; i < delays.size(); ++i) {
        if (!(contrasts[i] > 0.0)) {
            throw DomainError("decay fit needs positive contrasts");
        }
        const double y = std::log(contrasts[i]);
        st += delays[i];
        sy += y;
        stt += delays[i] * delays[i];
        sty += delays[i] * y;
    }
    const double den = n * stt - st * st;
    if (!(den > 0.0)) {
        throw PreconditionError("decay fit needs distinct delays");
    }
    return -(n * sty - st * sy) / den;
}

void write_pulse_csv(std::ostream &os, const PulseSequence &seq) {
    os << "index,phase_rad,duration_s,rabi_rad_per_s,layer\n";
    char buf[160];
    for (std::size_t i = 0; i < seq.pulses.size(); ++i) {
        const Pulse &p = seq.pulses[i];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%d\n", i, p.phase,
                      p.duration, p.rabi, p.layer);
        os << buf;
    }
}

} // namespace qspforge::pulse
