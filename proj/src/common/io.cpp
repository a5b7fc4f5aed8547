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

#include <fstream>
#include <sstream>

#include "qspforge/io.hpp"

namespace qspforge::io {

namespace {

std::vector<double> doubles(const json &j, const char *key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw DomainError(std::string("JSON field '") + key + "' must be an array");
    }
    return j.at(key).get<std::vector<double>>();
}

json nullable(const std::optional<double> &v) {
    return v ? json(*v) : json(nullptr);
}

} // namespace

json to_json(const targets::TrigPoly &p) {
    json re = json::array();
    json im = json::array();
    for (const auto &c : p.coeffs()) {
        re.push_back(c.real());
        im.push_back(c.imag());
    }
    return {{"degree", p.degree()}, {"real", re}, {"imag", im}};
}

targets::TrigPoly trigpoly_from_json(const json &j) {
    try {
        const int deg = j.at("degree").get<int>();
        const auto re = doubles(j, "real");
        const auto im = doubles(j, "imag");
        if (re.size() != im.size()) {
            throw DimensionError("trig poly real/imag lengths differ");
        }
        std::vector<cplx> c(re.size());
        for (std::size_t i = 0; i < re.size(); ++i) {
            c[i] = {re[i], im[i]};
        }
        return targets::TrigPoly(deg, std::move(c));
    } catch (const json::exception &e) {
        throw DomainError(std::string("malformed trig poly JSON: ") + e.what());
    }
}

json to_json(const qsp::AngleSequence &s) {
    return {{"L", s.layers()}, {"omega", s.omega}, {"theta", s.theta}, {"phi", s.phi}};
}

qsp::AngleSequence angles_from_json(const json &j) {
    try {
        qsp::AngleSequence s;
        s.omega = j.at("omega").get<double>();
        s.theta = doubles(j, "theta");
        s.phi = doubles(j, "phi");
        if (j.contains("L") && j.at("L").get<int>() != s.layers()) {
            throw DimensionError("angle JSON: L disagrees with array lengths");
        }
        s.validate();
        return s;
    } catch (const json::exception &e) {
        throw DomainError(std::string("malformed angle JSON: ") + e.what());
    }
}

json to_json(const pulse::NoiseSpec &s) {
    return {{"dephasing", s.dephasing},
            {"op_err", s.op_err},
            {"rabi", s.rabi},
            {"jitter_sigma", s.jitter_sigma},
            {"jitter_seed", s.jitter_seed}};
}

json to_json(const qpp::EigphaseReport &r) {
    json tau = json::array(), f = json::array(), fh = json::array(),
         e2 = json::array();
    for (const auto &rec : r.records) {
        tau.push_back(rec.tau);
        f.push_back(rec.f);
        fh.push_back(rec.fhat);
        e2.push_back(rec.sqerr);
    }
    return {{"tau", tau}, {"f", f}, {"fhat", fh}, {"sqerr", e2}, {"err_ext", r.err_ext}};
}

json summary_json(const std::string &function, const bench::SweepResult &r) {
    json layers = json::array();
    for (const auto &s : r.summary) {
        layers.push_back({{"L", s.layers},
                          {"mse_noiseless", s.mse_noiseless},
                          {"mse_noisy", nullable(s.mse_noisy)},
                          {"mse_shots", nullable(s.mse_shots)},
                          {"parseval_floor", s.parseval_floor},
                          {"total_pulse_time_s", s.total_pulse_time_s},
                          {"train_loss", s.train_loss},
                          {"converged", s.converged},
                          {"iterations", s.iterations}});
    }
    json diag = json::array();
    for (const auto &d : r.diagnostics) {
        diag.push_back({{"L", d.layers}, {"message", d.message}});
    }
    return {{"function", function}, {"layers", layers}, {"diagnostics", diag}};
}

json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw DomainError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
        throw DomainError("cannot write " + path.string());
    }
}

void write_json_file(const std::filesystem::path &path, const json &j) {
    write_text_file(path, j.dump(2) + "\n");
}

} // namespace qspforge::io
