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

// JSON forms of the library's value types.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qspforge/bench.hpp"
#include "qspforge/pulselab.hpp"
#include "qspforge/qppext.hpp"
#include "qspforge/qspcore.hpp"
#include "qspforge/targets.hpp"

namespace qspforge::io {

using json = nlohmann::json;

/// {degree, real, imag}, coefficient arrays indexed k + L.
json to_json(const targets::TrigPoly &p);
targets::TrigPoly trigpoly_from_json(const json &j);

/// {L, omega, theta, phi}
json to_json(const qsp::AngleSequence &s);
qsp::AngleSequence angles_from_json(const json &j);

json to_json(const pulse::NoiseSpec &s);

/// {tau, f, fhat, sqerr, err_ext}
json to_json(const qpp::EigphaseReport &r);

/// {function, layers: [{L, mse_noiseless, mse_noisy, parseval_floor,
/// total_pulse_time_s, ...}], diagnostics}
json summary_json(const std::string &function, const bench::SweepResult &r);

json read_json_file(const std::filesystem::path &path);
/// Two-space indented dump with a trailing newline.
void write_json_file(const std::filesystem::path &path, const json &j);
void write_text_file(const std::filesystem::path &path, const std::string &text);

} // namespace qspforge::io
