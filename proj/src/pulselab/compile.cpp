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

#include "qspforge/pulselab.hpp"

namespace qspforge::pulse {

double PulseSequence::total_duration() const {
    double t = 0.0;
    for (const auto &p : pulses) {
        t += p.duration;
    }
    return t;
}

int PulseSequence::count_in_layer(int layer) const {
    int n = 0;
    for (const auto &p : pulses) {
        n += p.layer == layer ? 1 : 0;
    }
    return n;
}

void PulseSequence::append(const PulseSequence &other) {
    pulses.insert(pulses.end(), other.pulses.begin(), other.pulses.end());
}

void NoiseSpec::validate() const {
    if (!(dephasing >= 0.0) || !std::isfinite(dephasing)) {
        throw PreconditionError("dephasing rate must be finite and >= 0");
    }
    if (!(std::abs(op_err) < 1.0)) {
        throw PreconditionError("|op_err| must be < 1");
    }
    if (!(rabi > 0.0) || !std::isfinite(rabi)) {
        throw PreconditionError("rabi rate must be finite and > 0");
    }
    if (!(jitter_sigma >= 0.0)) {
        throw PreconditionError("jitter_sigma must be >= 0");
    }
}

NoiseSpec NoiseSpec::noiseless(double rabi) {
    NoiseSpec s;
    s.rabi = rabi;
    s.dephasing = 0.0;
    return s;
}

NoiseSpec NoiseSpec::standard(double dephasing_scale) {
    NoiseSpec s;
    s.dephasing *= dephasing_scale;
    return s;
}

double wrap_angle(double a) {
    double r = std::remainder(a, kTwoPi); // [-π, π]
    return r <= -kPi ? r + kTwoPi : r;
}

CMat pulse_unitary(const Pulse &p) {
    const double a = 0.5 * p.rabi * p.duration;
    const double c = std::cos(a);
    const cplx s = -kI * std::sin(a);
    const cplx e = std::polar(1.0, p.phase);
    return CMat{{c, s * e}, {s * std::conj(e), c}};
}

CMat sequence_unitary(const PulseSequence &seq) {
    CMat u = CMat::identity(2);
    for (const auto &p : seq.pulses) {
        u = matmul(pulse_unitary(p), u);
    }
    return u;
}

CMat to_pulse_basis(const CMat &g) {
    if (g.dim() != 2) {
        throw DimensionError("to_pulse_basis expects a 2x2 gate");
    }
    return CMat{{g(1, 1), g(1, 0)}, {g(0, 1), g(0, 0)}};
}

namespace {

PulseSequence build_gate(GateKind kind, double angle, double rabi, int layer,
                         const Calibration &cal) {
    if (!std::isfinite(angle)) {
        throw DomainError("gate angle must be finite");
    }
    if (!(rabi > 0.0) || !std::isfinite(rabi)) {
        throw PreconditionError("rabi rate must be finite and > 0");
    }
    const double flip = angle < 0.0 ? kPi : 0.0;
    const double t = std::abs(angle) / rabi;
    PulseSequence out;
    if (kind == GateKind::Ry) {
        out.pulses.push_back({cal.ry_phase + flip, t, rabi, layer});
        return out;
    }
    const double half = 0.5 * kPi / rabi;
    out.pulses.push_back({cal.rz_phases[0], half, rabi, layer});
    out.pulses.push_back({cal.rz_phases[1] + flip, t, rabi, layer});
    out.pulses.push_back({cal.rz_phases[2], half, rabi, layer});
    return out;
}

bool matches(GateKind kind, const Calibration &cal) {
    constexpr double kProbe[] = {0.37, 1.9, -0.8, -2.6, 3.1};
    for (double a : kProbe) {
        const CMat want = to_pulse_basis(kind == GateKind::Ry ? qsp::ry(a)
                                                              : qsp::rz(a));
        const CMat got = sequence_unitary(build_gate(kind, a, 1.0, 0, cal));
        if (phase_aligned_distance(want, got) > 1e-12) {
            return false;
        }
    }
    return true;
}

} // namespace

Calibration calibrate() {
    Calibration cal;
    bool ry_ok = false;
    for (double ph : {kPi / 2, 3 * kPi / 2}) {
        cal.ry_phase = ph;
        if (matches(GateKind::Ry, cal)) {
            ry_ok = true;
            break;
        }
    }
    bool rz_ok = false;
    for (int mask = 0; mask < 8 && !rz_ok; ++mask) {
        cal.rz_phases = {(mask & 1) ? 3 * kPi / 2 : kPi / 2,
                         (mask & 2) ? kPi : 0.0,
                         (mask & 4) ? kPi / 2 : 3 * kPi / 2};
        rz_ok = matches(GateKind::Rz, cal);
    }
    if (!ry_ok || !rz_ok) {
        throw InvariantError("no pulse phase assignment reproduces the gates");
    }
    return cal;
}

const Calibration &default_calibration() {
    static const Calibration cal = calibrate();
    return cal;
}

PulseSequence compile_gate(GateKind kind, double angle, double rabi, int layer,
                           const Calibration &cal) {
    return build_gate(kind, angle, rabi, layer, cal);
}

PulseSequence compile_circuit(const qsp::AngleSequence &seq, double x,
                              const NoiseSpec &spec, const Calibration &cal) {
    seq.validate();
    spec.validate();
    if (!std::isfinite(x)) {
        throw DomainError("signal must be finite");
    }
    const double k = 1.0 - spec.op_err;
    const double om = spec.rabi;
    PulseSequence out;
    out.pulses.reserve(static_cast<std::size_t>(7 * seq.layers() + 4));
    for (int j = seq.layers(); j >= 0; --j) {
        const auto ju = static_cast<std::size_t>(j);
        out.append(build_gate(GateKind::Rz, wrap_angle(k * seq.phi[ju]), om, j,
                              cal));
        out.append(build_gate(GateKind::Ry, wrap_angle(k * seq.theta[ju]), om,
                              j, cal));
        if (j > 0) {
            out.append(build_gate(GateKind::RzSignal, wrap_angle(k * x), om, j,
                                  cal));
        }
    }
    return out;
}

} // namespace qspforge::pulse
