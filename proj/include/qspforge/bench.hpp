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

// Metrics, shot sampling and depth sweeps over trained circuits.

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qspforge/numkit.hpp"
#include "qspforge/pulselab.hpp"
#include "qspforge/qspcore.hpp"
#include "qspforge/targets.hpp"

namespace qspforge::bench {

/// Σ (ŷ - y)² / N.
double mse(std::span<const double> yhat, std::span<const double> y);

/// Estimate of ⟨Z⟩ = p from `shots` ±1 outcomes.
double shot_sample(double p_expect, long shots, RngStream &rng);

struct ReportedMse {
    int layers;
    double mse;
};

/// Measured STEP-function MSEs reported for the trapped-ion run.
std::span<const ReportedMse> reported_step_mse();

struct SweepRow {
    std::string function;
    int layers = 0;
    double x = 0.0;
    double f_ideal = 0.0;
    double z_noiseless = 0.0;
    std::optional<double> z_noisy;
    std::optional<double> z_shots;
    /// "ok" when the angles reached the training tolerance, else
    /// "unconverged" (best effort angles were used).
    std::string mse_flag = "ok";
};

struct LayerSummary {
    int layers = 0;
    double mse_noiseless = 0.0;  ///< dense midpoint grid
    std::optional<double> mse_noisy; ///< sweep grid
    std::optional<double> mse_shots;
    double parseval_floor = 0.0; ///< floor / 2π, on the MSE scale
    double total_pulse_time_s = 0.0; ///< mean over the sweep grid
    double train_loss = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct Diagnostic {
    int layers = 0;
    std::string message;
};

struct SweepResult {
    std::vector<SweepRow> rows;         ///< sorted by (function, L, x)
    std::vector<LayerSummary> summary;  ///< ascending L
    std::vector<Diagnostic> diagnostics;
    std::map<int, qsp::AngleSequence> angles;

    [[nodiscard]] const LayerSummary *find(int layers) const;
};

struct SweepOptions {
    int mse_points = 1000;
    bool noisy = true;
    long shots = 0; ///< 0 disables shot estimates
    std::uint64_t seed = 1;
    qsp::TrainConfig train = default_train();
    targets::FourierOptions fourier = default_fourier();
    /// Seed each depth with the previous (shallower) result.
    bool warm_start_chain = true;
    /// Pre-trained angles by depth; skip training for these.
    std::map<int, qsp::AngleSequence> pretrained;
    int threads = 0; ///< 0 resolves through QSPFORGE_THREADS

    static qsp::TrainConfig default_train();
    static targets::FourierOptions default_fourier();
};

/// Default pulse-level grid: 31 uniform cell-centred points on [-π, π]; the
/// cell centres keep the ±π wrap point of the target off the grid.
std::vector<double> default_sweep_grid(int points = 31);
std::vector<int> default_layers();

SweepResult run_sweep(const targets::TargetFn &f, std::span<const int> layers,
                      std::span<const double> x_grid,
                      const pulse::NoiseSpec &spec, const SweepOptions &opts);

/// Target polynomial used for training at depth L.
targets::TrigPoly training_target(const targets::TargetFn &f, int layers,
                                  const targets::FourierOptions &opts);

inline constexpr const char *kSweepCsvHeader =
    "function,L,x,f_ideal,z_noiseless,z_noisy,z_shots,mse_flag";

void write_sweep_csv(std::ostream &os, const SweepResult &r);
/// Parse a CSV written by write_sweep_csv; DomainError on a schema mismatch.
std::vector<SweepRow> read_sweep_csv(std::istream &is);

} // namespace qspforge::bench
