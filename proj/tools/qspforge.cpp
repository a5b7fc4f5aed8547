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

// qspforge command-line front end.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "qspforge/cli.hpp"
#include "qspforge/io.hpp"

namespace {

using nlohmann::json;
using Apply = std::function<void(json &)>;

struct Flags {
    CLI::App *app;
    std::vector<Apply> apply;

    template <class T>
    void add(const std::string &names, const std::string &key, const std::string &help,
             bool list = false) {
        auto store = std::make_shared<T>();
        CLI::Option *opt = app->add_option(names, *store, help);
        if (list) {
            opt->delimiter(',');
        }
        apply.push_back([store, opt, key](json &j) {
            if (opt->count() > 0) {
                j[key] = *store;
            }
        });
    }

    void flag(const std::string &names, const std::string &key, const std::string &help) {
        CLI::Option *opt = app->add_flag(names, help);
        apply.push_back([opt, key](json &j) {
            if (opt->count() > 0) {
                j[key] = true;
            }
        });
    }
};

void register_common(Flags &f) {
    f.add<std::string>("--function", "function", "target: step|step_hard|selu|relu|cos");
    f.add<double>("--steepness", "steepness", "arctan surrogate steepness N");
    f.add<int>("-L,--L", "L", "circuit depth (QPP: number of U/U† pairs)");
    f.add<std::vector<int>>("--layers", "layers", "comma separated depths", true);
    f.add<double>("--dephasing", "dephasing", "dephasing rate D in 1/s");
    f.add<double>("--op-err", "op_err", "multiplicative operational error");
    f.add<double>("--rabi", "rabi", "Rabi rate in rad/s");
    f.add<double>("--jitter-sigma", "jitter_sigma", "relative pulse-duration jitter");
    f.add<double>("--dt", "dt", "RK4 step in s (0: pi/(200 rabi))");
    f.add<int>("--grid-points", "grid_points", "pulse-level grid size");
    f.add<int>("--mse-points", "mse_points", "noiseless MSE grid size");
    f.add<int>("--restarts", "restarts", "optimizer restarts");
    f.add<int>("--max-iterations", "max_iterations", "optimizer iteration cap");
    f.add<double>("--tol", "tol", "training loss tolerance");
    f.add<std::string>("--filter", "filter", "Fourier filter: lanczos|none");
    f.add<bool>("--warm-start", "warm_start", "chain warm starts across depths");
    f.flag("--allow-unconverged", "allow_unconverged", "accept unconverged training");
    f.add<long>("--shots", "shots", "shot-sampled estimates (0: off)");
    f.add<std::uint64_t>("--seed", "seed", "RNG seed");
    f.add<std::string>("--angles", "angles", "angle JSON to use instead of training");
    f.add<double>("--pulse-x", "pulse_x", "signal for the pulse program dump");
    f.add<std::string>("--window", "window", "coherence window: driven|free");
    f.add<double>("--window-periods", "window_periods", "coherence window in Rabi periods");
    f.add<int>("--coherence-samples", "coherence_samples", "samples per coherence window");
    f.add<int>("--coherence-points", "coherence_points", "signal values for coherence traces");
    f.add<std::vector<double>>("--delays", "delays", "Ramsey delays in s", true);
    f.add<int>("--phases", "phases", "Ramsey scan phases");
    f.add<int>("--trials", "trials", "random trials");
    f.add<int>("-n,--n,--qubits", "qubits", "system qubits (0: cycle 1..3)");
    f.add<double>("--delta", "delta", "QPE target precision in rad");
    f.add<int>("-M,--decision-shots", "decision_shots", "shots per QPE decision (odd)");
    f.add<std::string>("--out", "out", "output directory");

    auto delay = std::make_shared<double>();
    CLI::Option *opt = f.app->add_option("--delay", *delay, "single Ramsey delay in s");
    f.apply.push_back([delay, opt](json &j) {
        if (opt->count() > 0) {
            j["delays"] = std::vector<double>{*delay};
        }
    });
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qspforge: trigonometric QSP synthesis, simulation and verification"};
    app.require_subcommand(1);
    int threads = 0;
    std::string config_path;
    std::vector<Flags> flags;
    flags.reserve(qspforge::cli::command_names().size());
    const std::map<std::string, std::string> about{
        {"train", "fit QSP angles to a target"},
        {"simulate", "pulse-level noisy expectation at one signal"},
        {"sweep", "MSE against depth, noiseless and pulse-level"},
        {"coherence", "coherence during a program vs idle decay"},
        {"ramsey", "Ramsey fringe contrast against delay"},
        {"qpp-verify", "eigenphase error bounds of the multi-qubit extension"},
        {"qpe", "binary-search phase estimation trials"},
        {"toy-dephase", "fully dephasing layer-by-layer model"},
    };
    for (const auto &name : qspforge::cli::command_names()) {
        CLI::App *sub = app.add_subcommand(name, about.at(name));
        sub->add_option("--config", config_path, "JSON config; flags override it");
        sub->add_option("--threads", threads, "worker threads (or QSPFORGE_THREADS)");
        flags.push_back({sub, {}});
        register_common(flags.back());
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << json{{"error", {{"kind", "config"}, {"exit_code", 2}, {"message", e.what()}}}}.dump()
                  << '\n';
        return 2;
    }

    std::filesystem::path dir;
    try {
        std::size_t which = 0;
        while (!app.got_subcommand(flags[which].app)) {
            ++which;
        }
        const std::string command = flags[which].app->get_name();
        auto cfg = qspforge::cli::RunConfig::defaults_for(command);
        if (!config_path.empty()) {
            auto j = qspforge::io::read_json_file(config_path);
            if (j.contains("command") && j.at("command") != command) {
                throw qspforge::DomainError("config was written for '" +
                                            j.at("command").get<std::string>() + "'");
            }
            cfg.merge(j);
        }
        json overrides = json::object();
        for (const auto &a : flags[which].apply) {
            a(overrides);
        }
        cfg.merge(overrides);
        cfg.validate();
        dir = cfg.artifact_dir();
        qspforge::cli::run_command(cfg, threads, std::cout);
        return 0;
    } catch (const std::exception &e) {
        const auto j = qspforge::cli::error_json(e);
        std::cerr << j.dump() << '\n';
        if (!dir.empty() && std::filesystem::exists(dir)) {
            try {
                qspforge::io::write_json_file(dir / "error.json", j);
            } catch (const std::exception &) {
            }
        }
        return qspforge::cli::exit_code_for(e);
    }
}
