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
#include <cstdio>
#include <functional>
#include <map>

#include "qspforge/cli.hpp"
#include "qspforge/errors.hpp"
#include "qspforge/pulselab.hpp"

namespace qspforge::cli {

using nlohmann::json;

namespace {

// Field table shared by merge() and to_json().

using Reader = std::function<void(RunConfig &, const json &)>;
using Writer = std::function<void(const RunConfig &, json &)>;

struct Field {
    Reader read;
    Writer write;
};

template <class T> Field field(const std::string &key, T RunConfig::*m) {
    return {[m](RunConfig &c, const json &v) { c.*m = v.get<T>(); },
            [key, m](const RunConfig &c, json &out) { out[key] = c.*m; }};
}

const std::map<std::string, Field> &fields() {
    static const std::map<std::string, Field> f{
        {"command", field("command", &RunConfig::command)},
        {"function", field("function", &RunConfig::function)},
        {"steepness", field("steepness", &RunConfig::steepness)},
        {"L", field("L", &RunConfig::L)},
        {"layers", field("layers", &RunConfig::layers)},
        {"dephasing", field("dephasing", &RunConfig::dephasing)},
        {"op_err", field("op_err", &RunConfig::op_err)},
        {"rabi", field("rabi", &RunConfig::rabi)},
        {"jitter_sigma", field("jitter_sigma", &RunConfig::jitter_sigma)},
        {"dt", field("dt", &RunConfig::dt)},
        {"grid_points", field("grid_points", &RunConfig::grid_points)},
        {"mse_points", field("mse_points", &RunConfig::mse_points)},
        {"restarts", field("restarts", &RunConfig::restarts)},
        {"max_iterations", field("max_iterations", &RunConfig::max_iterations)},
        {"tol", field("tol", &RunConfig::tol)},
        {"filter", field("filter", &RunConfig::filter)},
        {"warm_start", field("warm_start", &RunConfig::warm_start)},
        {"allow_unconverged", field("allow_unconverged", &RunConfig::allow_unconverged)},
        {"shots", field("shots", &RunConfig::shots)},
        {"seed", field("seed", &RunConfig::seed)},
        {"angles", field("angles", &RunConfig::angles)},
        {"pulse_x", field("pulse_x", &RunConfig::pulse_x)},
        {"window", field("window", &RunConfig::window)},
        {"window_periods", field("window_periods", &RunConfig::window_periods)},
        {"coherence_samples", field("coherence_samples", &RunConfig::coherence_samples)},
        {"coherence_points", field("coherence_points", &RunConfig::coherence_points)},
        {"delays", field("delays", &RunConfig::delays)},
        {"phases", field("phases", &RunConfig::phases)},
        {"trials", field("trials", &RunConfig::trials)},
        {"qubits", field("qubits", &RunConfig::qubits)},
        {"delta", field("delta", &RunConfig::delta)},
        {"decision_shots", field("decision_shots", &RunConfig::decision_shots)},
        {"out", field("out", &RunConfig::out)},
    };
    return f;
}

} // namespace

RunConfig RunConfig::defaults_for(const std::string &command) {
    if (std::find(command_names().begin(), command_names().end(), command) ==
        command_names().end()) {
        throw DomainError("unknown command '" + command + "'");
    }
    RunConfig c;
    c.command = command;
    c.dephasing = pulse::kDefaultDephasingPerRabi * pulse::kDefaultRabi;
    c.rabi = pulse::kDefaultRabi;
    c.delta = kTwoPi / 256;
    if (command == "sweep") {
        c.layers = {15, 30, 60, 90, 120, 180, 240, 300, 330, 360};
    } else if (command == "ramsey") {
        for (int k = 0; k <= 20; ++k) {
            c.delays.push_back(2e-3 * k);
        }
    } else if (command == "qpp-verify") {
        c.function = "selu";
        c.L = 15;
    } else if (command == "qpe") {
        c.L = 120;
    } else if (command == "toy-dephase") {
        c.L = 15;
    }
    return c;
}

void RunConfig::merge(const json &j) {
    if (!j.is_object()) {
        throw DomainError("config must be a JSON object");
    }
    for (const auto &[key, value] : j.items()) {
        const auto it = fields().find(key);
        if (it == fields().end()) {
            throw DomainError("unknown config key '" + key + "'");
        }
        try {
            it->second.read(*this, value);
        } catch (const json::exception &e) {
            throw DomainError("config key '" + key + "': " + e.what());
        }
    }
}

json RunConfig::to_json() const {
    json out = json::object();
    for (const auto &[key, f] : fields()) {
        f.write(*this, out);
    }
    return out;
}

std::string RunConfig::hash() const {
    json j = to_json();
    j.erase("out");
    const std::string text = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf, 12);
}

std::filesystem::path RunConfig::artifact_dir() const {
    return std::filesystem::path(out) / (command + "-" + hash());
}

void RunConfig::validate() const {
    auto need = [](bool ok, const std::string &what) {
        if (!ok) {
            throw DomainError("invalid config: " + what);
        }
    };
    need(L >= 0, "L must be >= 0");
    for (int l : layers) {
        need(l >= 0, "layers must be >= 0");
    }
    need(grid_points >= 1, "grid_points must be >= 1");
    need(mse_points >= 1, "mse_points must be >= 1");
    need(restarts >= 1, "restarts must be >= 1");
    need(max_iterations >= 1, "max_iterations must be >= 1");
    need(tol > 0.0, "tol must be > 0");
    need(filter == "lanczos" || filter == "none", "filter must be lanczos|none");
    need(window == "driven" || window == "free", "window must be driven|free");
    need(shots >= 0, "shots must be >= 0");
    need(coherence_points >= 1, "coherence_points must be >= 1");
    need(trials >= 1, "trials must be >= 1");
    need(qubits >= 0 && qubits <= 3, "qubits must be 0..3");
    need(decision_shots >= 1 && decision_shots % 2 == 1,
         "decision_shots must be odd");
    need(!out.empty(), "out must be set");
}

} // namespace qspforge::cli
