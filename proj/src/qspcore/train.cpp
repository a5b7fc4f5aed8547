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
#include <limits>
#include <string>

#include <ceres/ceres.h>

#include "qspforge/kernels.hpp"
#include "qspforge/parallel.hpp"
#include "qspforge/qspcore.hpp"

namespace qspforge::qsp {

namespace {

class GridLoss final : public ceres::FirstOrderFunction {
  public:
    GridLoss(int layers, std::vector<double> grid, std::vector<double> targets)
        : layers_(layers), grid_(std::move(grid)), targets_(std::move(targets)) {}

    bool Evaluate(const double *parameters, double *cost,
                  double *gradient) const override {
        const auto n = static_cast<std::size_t>(layers_ + 1);
        const kernels::CircuitView view{
            parameters[0], std::span<const double>(parameters + 1, n),
            std::span<const double>(parameters + 1 + n, n)};
        std::span<double> g;
        if (gradient != nullptr) {
            g = std::span<double>(gradient, static_cast<std::size_t>(NumParameters()));
        }
        *cost = kernels::loss_grad_batch(view, grid_, targets_, g);
        return std::isfinite(*cost);
    }

    int NumParameters() const override { return 2 * layers_ + 3; }

  private:
    int layers_;
    std::vector<double> grid_;
    std::vector<double> targets_;
};

class StopAtTolerance final : public ceres::IterationCallback {
  public:
    explicit StopAtTolerance(double tol) : tol_(tol) {}
    ceres::CallbackReturnType operator()(const ceres::IterationSummary &s) override {
        return s.cost <= tol_ ? ceres::SOLVER_TERMINATE_SUCCESSFULLY
                              : ceres::SOLVER_CONTINUE;
    }

  private:
    double tol_;
};

AngleSequence random_init(int layers, double small, RngStream rng) {
    AngleSequence s = AngleSequence::identity(layers);
    s.theta[0] = rng.uniform(-kPi, kPi);
    s.phi[0] = rng.uniform(-small, small);
    for (int j = 1; j <= layers; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        s.theta[jj] = rng.uniform(-small, small);
        s.phi[jj] = rng.uniform(-small, small);
    }
    return s;
}

struct RestartOutcome {
    AngleSequence seq;
    double loss = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

RestartOutcome run_restart(const AngleSequence &init, const std::vector<double> &grid,
                           const std::vector<double> &ys, const TrainConfig &cfg) {
    const int layers = init.layers();
    std::vector<double> params = init.pack();
    ceres::GradientProblem problem(new GridLoss(layers, grid, ys));

    ceres::GradientProblemSolver::Options options;
    options.line_search_direction_type = ceres::LBFGS;
    options.line_search_type = ceres::WOLFE;
    options.max_lbfgs_rank = 30;
    options.max_num_iterations = cfg.max_iterations;
    options.function_tolerance = 1e-15;
    options.gradient_tolerance = 1e-14;
    options.parameter_tolerance = 1e-15;
    options.logging_type = ceres::SILENT;
    options.minimizer_progress_to_stdout = false;
    StopAtTolerance stop(cfg.tol);
    options.callbacks.push_back(&stop);

    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(options, problem, params.data(), &summary);

    RestartOutcome out;
    out.seq = AngleSequence::unpack(params);
    out.iterations = static_cast<int>(summary.iterations.size());
    out.loss = kernels::loss_grad_batch(
        kernels::CircuitView{out.seq.omega, out.seq.theta, out.seq.phi}, grid,
        ys, {});
    if (!std::isfinite(out.loss)) {
        out.loss = std::numeric_limits<double>::infinity();
    }
    return out;
}

} // namespace

TrainingFailure::TrainingFailure(TrainResult r)
    : ConvergenceError("train_angles: best loss " + std::to_string(r.loss) +
                           " above tolerance after " +
                           std::to_string(r.restarts_run) + " restarts",
                       r.loss),
      result(std::move(r)) {}

TrainResult train_angles(const targets::TrigPoly &F, int layers,
                         const TrainConfig &cfg, const RngStream &rng) {
    if (layers < F.degree()) {
        throw PreconditionError("train_angles: need L >= deg(F) (L = " +
                                std::to_string(layers) + ", deg = " +
                                std::to_string(F.degree()) + ")");
    }
    if (!F.is_real_valued()) {
        throw PreconditionError("train_angles: target must be real-valued");
    }
    if (cfg.restarts < 1 || cfg.max_iterations < 1) {
        throw PreconditionError("train_angles: need at least one restart and iteration");
    }
    const auto grid = training_grid(layers);
    std::vector<double> ys(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ys[i] = F.eval_real(grid[i]);
        if (std::abs(ys[i]) > 1.0 + 1e-12) {
            throw PreconditionError("train_angles: |F| exceeds 1 on the training grid");
        }
    }
    if (cfg.warm_start && cfg.warm_start->layers() > layers) {
        throw PreconditionError("train_angles: warm start deeper than target depth");
    }

    const int threads = resolve_threads(cfg.threads);
    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
    int launched = 0;
    int first_success = -1;
    // Restarts run in waves of `threads`; the winner is a function of the
    // outcomes up to the first success, so wave size cannot change it.
    while (launched < cfg.restarts && first_success < 0) {
        const int wave = std::min(threads, cfg.restarts - launched);
        const int base = launched;
        parallel_for(static_cast<std::size_t>(wave), threads, [&](std::size_t k) {
            const int r = base + static_cast<int>(k);
            AngleSequence init;
            if (r == 0 && cfg.warm_start) {
                cfg.warm_start->validate();
                init = cfg.warm_start->padded(layers - cfg.warm_start->layers());
            } else {
                init = random_init(layers, cfg.init_small,
                                   rng.substream(static_cast<std::uint64_t>(r)));
            }
            outcomes[static_cast<std::size_t>(r)] = run_restart(init, grid, ys, cfg);
        });
        launched += wave;
        if (cfg.stop_on_success) {
            for (int r = base; r < launched; ++r) {
                if (outcomes[static_cast<std::size_t>(r)].loss <= cfg.tol) {
                    first_success = r;
                    break;
                }
            }
        }
    }

    const int considered = first_success >= 0 ? first_success + 1 : launched;
    int best = 0;
    for (int r = 1; r < considered; ++r) {
        if (outcomes[static_cast<std::size_t>(r)].loss <
            outcomes[static_cast<std::size_t>(best)].loss) {
            best = r;
        }
    }
    const auto &win = outcomes[static_cast<std::size_t>(best)];
    TrainResult result{win.seq, win.loss, win.loss <= cfg.tol, best, considered,
                       win.iterations};
    if (!result.converged && cfg.strict) {
        throw TrainingFailure(std::move(result));
    }
    return result;
}

} // namespace qspforge::qsp
