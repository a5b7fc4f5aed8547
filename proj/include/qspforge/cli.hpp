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
#pragma once

// Run configuration and subcommand drivers behind the qspforge executable.
//
// Precedence: built-in per-command defaults < --config JSON file < flags.
// The resolved configuration is written as config.json next to the
// artifacts; re-running with it reproduces them byte for byte.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace qspforge::cli {

struct RunConfig {
    std::string command;
    std::string function = "step";
    double steepness = 100.0;
    int L = 60;
    std::vector<int> layers;
    double dephasing = 0.0; ///< D, 1/s
    double op_err = 0.0;
    double rabi = 0.0;      ///< Ω, rad/s
    double jitter_sigma = 0.0;
    double dt = 0.0;        ///< RK4 step, 0 = π/(200Ω)
    int grid_points = 31;
    int mse_points = 1000;
    int restarts = 2;
    int max_iterations = 5000;
    double tol = 1e-8;
    std::string filter = "lanczos";
    bool warm_start = true;
    bool allow_unconverged = false;
    long shots = 0;
    std::uint64_t seed = 1;
    std::string angles;     ///< optional angle JSON for simulate/coherence
    double pulse_x = 0.5;
    std::string window = "driven";
    double window_periods = 1.0;
    int coherence_samples = 64;
    int coherence_points = 6;
    std::vector<double> delays;
    int phases = 16;
    int trials = 50;
    int qubits = 0;         ///< 0 cycles 1..3
    double delta = 0.0;     ///< 0 = 2π/256
    int decision_shots = 15;
    std::string out = "runs";

    static RunConfig defaults_for(const std::string &command);
    /// Overlay keys of `j`; throws DomainError on unknown keys or types.
    void merge(const nlohmann::json &j);
    [[nodiscard]] nlohmann::json to_json() const;
    /// 12 hex digits of FNV-1a over the canonical dump, `out` excluded.
    [[nodiscard]] std::string hash() const;
    [[nodiscard]] std::filesystem::path artifact_dir() const;
    void validate() const;
};

inline const std::vector<std::string> &command_names() {
    static const std::vector<std::string> names{
        "train", "simulate", "sweep", "coherence",
        "ramsey", "qpp-verify", "qpe", "toy-dephase"};
    return names;
}

/// Run one subcommand; writes artifacts, logs a short report to `log`, and
/// returns the artifact directory. Errors propagate as qspforge::Error.
std::filesystem::path run_command(const RunConfig &cfg, int threads,
                                  std::ostream &log);

/// Exit status for an in-flight exception (0 never returned).
int exit_code_for(const std::exception &e);
/// {"error": {kind, exit_code, message}}
nlohmann::json error_json(const std::exception &e);

} // namespace qspforge::cli
