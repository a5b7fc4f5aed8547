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
#include <istream>
#include <ostream>
#include <sstream>

#include "qspforge/bench.hpp"

namespace qspforge::bench {

double mse(std::span<const double> yhat, std::span<const double> y) {
    if (yhat.size() != y.size()) {
        throw DimensionError("mse: length mismatch");
    }
    if (y.empty()) {
        throw PreconditionError("mse: empty input");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = yhat[i] - y[i];
        acc += d * d;
    }
    return acc / static_cast<double>(y.size());
}

double shot_sample(double p_expect, long shots, RngStream &rng) {
    if (shots < 1) {
        throw PreconditionError("shot_sample needs shots >= 1");
    }
    if (!(std::abs(p_expect) <= 1.0 + 1e-6)) {
        throw DomainError("expectation outside [-1, 1]");
    }
    const double q = std::clamp(0.5 * (1.0 + p_expect), 0.0, 1.0);
    long up = 0;
    for (long s = 0; s < shots; ++s) {
        up += rng.bernoulli(q) ? 1 : 0;
    }
    return 2.0 * static_cast<double>(up) / static_cast<double>(shots) - 1.0;
}

std::span<const ReportedMse> reported_step_mse() {
    static constexpr std::array<ReportedMse, 4> kTable{
        {{30, 2.8e-2}, {120, 2.5e-3}, {240, 1.9e-3}, {360, 5.5e-3}}};
    return kTable;
}

const LayerSummary *SweepResult::find(int layers) const {
    for (const auto &s : summary) {
        if (s.layers == layers) {
            return &s;
        }
    }
    return nullptr;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double parse_num(const std::string &s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
        throw DomainError("malformed number in sweep CSV: " + s);
    }
    return v;
}

} // namespace

void write_sweep_csv(std::ostream &os, const SweepResult &r) {
    os << kSweepCsvHeader << '\n';
    for (const auto &row : r.rows) {
        os << row.function << ',' << row.layers << ',' << num(row.x) << ','
           << num(row.f_ideal) << ',' << num(row.z_noiseless) << ','
           << (row.z_noisy ? num(*row.z_noisy) : "") << ','
           << (row.z_shots ? num(*row.z_shots) : "") << ',' << row.mse_flag
           << '\n';
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream &is) {
    std::string line;
    if (!std::getline(is, line) || line != kSweepCsvHeader) {
        throw DomainError("sweep CSV header mismatch");
    }
    std::vector<SweepRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        const auto c = split(line);
        if (c.size() != 8) {
            throw DomainError("sweep CSV row has the wrong column count");
        }
        try {
            SweepRow row;
            row.function = c[0];
            row.layers = std::stoi(c[1]);
            row.x = parse_num(c[2]);
            row.f_ideal = parse_num(c[3]);
            row.z_noiseless = parse_num(c[4]);
            if (!c[5].empty()) {
                row.z_noisy = parse_num(c[5]);
            }
            if (!c[6].empty()) {
                row.z_shots = parse_num(c[6]);
            }
            row.mse_flag = c[7];
            rows.push_back(std::move(row));
        } catch (const std::logic_error &) {
            throw DomainError("malformed sweep CSV row: " + line);
        }
    }
    return rows;
}

} // namespace qspforge::bench
