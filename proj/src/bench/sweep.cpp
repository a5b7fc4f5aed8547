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

#include "qspforge/bench.hpp"
#include "qspforge/parallel.hpp"

namespace qspforge::bench {

qsp::TrainConfig SweepOptions::default_train() {
    qsp::TrainConfig c;
    c.restarts = 2;
    c.strict = false;
    return c;
}

targets::FourierOptions SweepOptions::default_fourier() {
    targets::FourierOptions o;
    o.filter = targets::GibbsFilter::Lanczos;
    return o;
}

std::vector<double> default_sweep_grid(int points) {
    if (points < 1) {
        throw PreconditionError("sweep grid needs at least 1 point");
    }
    return targets::midpoint_grid(points);
}

std::vector<int> default_layers() {
    return {15, 30, 60, 90, 120, 180, 240, 300, 330, 360};
}

targets::TrigPoly training_target(const targets::TargetFn &f, int layers,
                                  const targets::FourierOptions &opts) {
    return targets::fourier_truncate(f, layers, opts);
}

SweepResult run_sweep(const targets::TargetFn &f, std::span<const int> layers_in,
                      std::span<const double> x_in,
                      const pulse::NoiseSpec &spec, const SweepOptions &opts) {
    if (opts.noisy) {
        spec.validate();
    }
    std::vector<int> layers(layers_in.begin(), layers_in.end());
    std::sort(layers.begin(), layers.end());
    layers.erase(std::unique(layers.begin(), layers.end()), layers.end());
    std::vector<double> xs(x_in.begin(), x_in.end());
    std::sort(xs.begin(), xs.end());
    for (int L : layers) {
        if (L < 0) {
            throw PreconditionError("layer counts must be >= 0");
        }
    }

    const int threads = resolve_threads(opts.threads);
    const auto dense = targets::midpoint_grid(opts.mse_points);
    std::vector<double> f_dense(dense.size());
    for (std::size_t i = 0; i < dense.size(); ++i) {
        f_dense[i] = f(dense[i]);
    }
    std::vector<double> f_grid(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        f_grid[i] = f(xs[i]);
    }

    SweepResult res;
    std::optional<qsp::AngleSequence> previous;
    const RngStream root(opts.seed, 0);
    for (int L : layers) {
        LayerSummary sum;
        sum.layers = L;
        qsp::AngleSequence seq;
        try {
            const auto F = training_target(f, L, opts.fourier);
            if (auto it = opts.pretrained.find(L); it != opts.pretrained.end()) {
                seq = it->second;
                if (seq.layers() != L) {
                    throw PreconditionError("pretrained angles have the wrong depth");
                }
                sum.train_loss = qsp::loss_and_gradient(
                    seq, F, qsp::training_grid(L), nullptr);
                sum.converged = sum.train_loss <= opts.train.tol;
            } else {
                qsp::TrainConfig cfg = opts.train;
                cfg.strict = false;
                cfg.threads = threads;
                if (opts.warm_start_chain && previous &&
                    previous->layers() <= L) {
                    cfg.warm_start = previous;
                }
                const auto tr = qsp::train_angles(
                    F, L, cfg, root.substream(static_cast<std::uint64_t>(L)));
                seq = tr.seq;
                sum.train_loss = tr.loss;
                sum.converged = tr.converged;
                sum.iterations = tr.iterations;
            }
        } catch (const Error &e) {
            res.diagnostics.push_back({L, e.what()});
            continue;
        }
        if (!sum.converged) {
            char buf[96];
            std::snprintf(buf, sizeof buf,
                          "training stopped at loss %.3e above tolerance %.1e",
                          sum.train_loss, opts.train.tol);
            res.diagnostics.push_back({L, buf});
        }
        previous = seq;

        const auto z_dense = qsp::expectation_grid(seq, dense);
        sum.mse_noiseless = mse(z_dense, f_dense);
        sum.parseval_floor = targets::parseval_tail(f, L) / kTwoPi;

        const auto z_grid = qsp::expectation_grid(seq, xs);
        std::vector<double> z_noisy(xs.size());
        std::vector<double> t_pulse(xs.size());
        std::vector<double> z_shot(xs.size());
        parallel_for(xs.size(), threads, [&](std::size_t i) {
            if (opts.noisy) {
                const auto run = pulse::run_noisy_qsp(seq, xs[i], spec);
                z_noisy[i] = run.expectation;
                t_pulse[i] = run.total_time;
            }
            if (opts.shots > 0) {
                RngStream rng = RngStream(opts.seed, 1)
                                    .substream(static_cast<std::uint64_t>(L))
                                    .substream(i);
                const double p = opts.noisy ? z_noisy[i] : z_grid[i];
                z_shot[i] = shot_sample(std::clamp(p, -1.0, 1.0), opts.shots, rng);
            }
        });
        if (opts.noisy && !xs.empty()) {
            sum.mse_noisy = mse(z_noisy, f_grid);
            double t = 0.0;
            for (double v : t_pulse) {
                t += v;
            }
            sum.total_pulse_time_s = t / static_cast<double>(xs.size());
        }
        if (opts.shots > 0 && !xs.empty()) {
            sum.mse_shots = mse(z_shot, f_grid);
        }
        for (std::size_t i = 0; i < xs.size(); ++i) {
            SweepRow row;
            row.function = f.name;
            row.layers = L;
            row.x = xs[i];
            row.f_ideal = f_grid[i];
            row.z_noiseless = z_grid[i];
            if (opts.noisy) {
                row.z_noisy = z_noisy[i];
            }
            if (opts.shots > 0) {
                row.z_shots = z_shot[i];
            }
            row.mse_flag = sum.converged ? "ok" : "unconverged";
            res.rows.push_back(std::move(row));
        }
        res.angles.emplace(L, std::move(seq));
        res.summary.push_back(sum);
    }
    return res;
}

} // namespace qspforge::bench
