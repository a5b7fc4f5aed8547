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
#include <string>

#include "qspforge/targets.hpp"

namespace qspforge::targets {

namespace {

constexpr double kDomainSlack = 1e-12;

void check_domain(double x, const char *who) {
    if (!std::isfinite(x) || x < -kPi - kDomainSlack || x > kPi + kDomainSlack) {
        throw DomainError(std::string(who) + ": x must lie in [-pi, pi], got " +
                          std::to_string(x));
    }
}

} // namespace

double eval_step(double x) {
    check_domain(x, "eval_step");
    return x >= 0.0 ? 1.0 : -1.0;
}

double eval_step_surrogate(double x, double steepness) {
    check_domain(x, "eval_step_surrogate");
    if (!(steepness > 0.0)) {
        throw DomainError("eval_step_surrogate: steepness must be positive");
    }
    return (2.0 / kPi) * std::atan(steepness * x);
}

double eval_selu(double x) {
    check_domain(x, "eval_selu");
    return x >= 0.0 ? x / kPi : (kSeluAlpha / kPi) * std::expm1(x);
}

double eval_relu(double x) {
    check_domain(x, "eval_relu");
    return x >= 0.0 ? x / kPi : 0.0;
}

TargetFn make_target(const std::string &name, double steepness) {
    if (name == "step") {
        if (!(steepness > 0.0)) {
            throw DomainError("make_target: steepness must be positive");
        }
        return TargetFn{name,
                        [steepness](double x) {
                            return eval_step_surrogate(x, steepness);
                        },
                        {{"steepness", steepness}}};
    }
    if (name == "step_hard") {
        return TargetFn{name, eval_step, {}};
    }
    if (name == "selu") {
        return TargetFn{name, eval_selu, {{"alpha", kSeluAlpha}}};
    }
    if (name == "relu") {
        return TargetFn{name, eval_relu, {}};
    }
    if (name == "cos") {
        return TargetFn{name,
                        [](double x) {
                            check_domain(x, "cos");
                            return std::cos(x);
                        },
                        {}};
    }
    throw DomainError("make_target: unknown function '" + name + "'");
}

double grid_sup(const TargetFn &f, int points) {
    double sup = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = -kPi + kTwoPi * i / (points - 1);
        sup = std::max(sup, std::abs(f(x)));
    }
    return sup;
}

TargetFn custom_target(std::string name, std::function<double(double)> fn) {
    TargetFn f{std::move(name), std::move(fn), {}};
    constexpr int kCheckPoints = 10000;
    for (int i = 0; i < kCheckPoints; ++i) {
        const double x = -kPi + kTwoPi * i / (kCheckPoints - 1);
        const double v = f(x);
        if (!std::isfinite(v) || std::abs(v) > 1.0) {
            throw DomainError("custom_target: '" + f.name +
                              "' leaves [-1, 1] at x = " + std::to_string(x));
        }
    }
    return f;
}

std::vector<double> midpoint_grid(int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        xs[static_cast<std::size_t>(j)] = -kPi + kTwoPi * (j + 0.5) / n;
    }
    return xs;
}

std::vector<double> periodic_grid(int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        xs[static_cast<std::size_t>(j)] = -kPi + kTwoPi * j / n;
    }
    return xs;
}

} // namespace qspforge::targets
