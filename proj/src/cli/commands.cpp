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
#include <ostream>
#include <sstream>

#include "qspforge/bench.hpp"
#include "qspforge/cli.hpp"
#include "qspforge/io.hpp"
#include "qspforge/parallel.hpp"
#include "qspforge/pulselab.hpp"
#include "qspforge/qppext.hpp"

namespace qspforge::cli {

using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Context {
    const RunConfig &cfg;
    int threads;
    std::ostream &log;
    std::filesystem::path dir;

    [[nodiscard]] std::filesystem::path file(const std::string &suffix) const {
        return dir / (cfg.command + "-" + cfg.hash() + suffix);
    }
};

targets::TargetFn target(const RunConfig &c) {
    return targets::make_target(c.function, c.steepness);
}

pulse::NoiseSpec noise(const RunConfig &c) {
    pulse::NoiseSpec s;
    s.dephasing = c.dephasing;
    s.op_err = c.op_err;
    s.rabi = c.rabi;
    s.jitter_sigma = c.jitter_sigma;
    s.jitter_seed = c.seed;
    s.validate();
    return s;
}

targets::FourierOptions fourier(const RunConfig &c) {
    targets::FourierOptions o;
    o.filter = c.filter == "none" ? targets::GibbsFilter::None
                                  : targets::GibbsFilter::Lanczos;
    return o;
}

qsp::TrainConfig train_config(const RunConfig &c, int threads) {
    qsp::TrainConfig t;
    t.restarts = c.restarts;
    t.max_iterations = c.max_iterations;
    t.tol = c.tol;
    t.threads = threads;
    t.strict = !c.allow_unconverged;
    return t;
}

pulse::CoherenceOptions coherence_options(const RunConfig &c) {
    pulse::CoherenceOptions o;
    o.window = c.window == "free" ? pulse::CoherenceWindow::Free
                                  : pulse::CoherenceWindow::Driven;
    o.window_periods = c.window_periods;
    o.samples = c.coherence_samples;
    return o;
}

// Angles for a depth-L circuit: from a file when given, else trained.
qsp::AngleSequence obtain_angles(const Context &ctx, int layers, bool strict) {
    const auto &c = ctx.cfg;
    if (!c.angles.empty()) {
        auto s = io::angles_from_json(io::read_json_file(c.angles));
        if (s.layers() != layers) {
            throw DomainError("angle file depth does not match L");
        }
        return s;
    }
    auto tc = train_config(c, ctx.threads);
    tc.strict = strict && !c.allow_unconverged;
    const auto F = bench::training_target(target(c), layers, fourier(c));
    const auto r = qsp::train_angles(F, layers, tc, RngStream(c.seed, 0));
    if (!r.converged) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "note: L=%d training stopped at loss %.3e\n",
                      layers, r.loss);
        ctx.log << buf;
    }
    return r.seq;
}

bench::SweepOptions sweep_options(const RunConfig &c, int threads) {
    bench::SweepOptions o;
    o.mse_points = c.mse_points;
    o.shots = c.shots;
    o.seed = c.seed;
    o.train = train_config(c, threads);
    o.train.strict = false;
    o.fourier = fourier(c);
    o.warm_start_chain = c.warm_start;
    o.threads = threads;
    return o;
}

void emit_sweep(const Context &ctx, const bench::SweepResult &r) {
    std::ostringstream csv;
    bench::write_sweep_csv(csv, r);
    io::write_text_file(ctx.file(".csv"), csv.str());
    io::write_json_file(ctx.file(".summary.json"), io::summary_json(ctx.cfg.function, r));
    json angles = json::array();
    for (const auto &[L, s] : r.angles) {
        angles.push_back(io::to_json(s));
    }
    io::write_json_file(ctx.file(".angles.json"), angles);
    for (const auto &s : r.summary) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "L=%d mse_noiseless=%.4e mse_noisy=%s floor=%.4e\n",
                      s.layers, s.mse_noiseless,
                      s.mse_noisy ? num(*s.mse_noisy).c_str() : "-", s.parseval_floor);
        ctx.log << buf;
    }
    for (const auto &d : r.diagnostics) {
        ctx.log << "L=" << d.layers << ": " << d.message << '\n';
    }
}

void cmd_train(const Context &ctx) {
    const auto &c = ctx.cfg;
    const auto f = target(c);
    const auto F = bench::training_target(f, c.L, fourier(c));
    io::write_json_file(ctx.file(".target.json"), io::to_json(F));
    auto tc = train_config(c, ctx.threads);
    tc.strict = false;
    const auto r = qsp::train_angles(F, c.L, tc, RngStream(c.seed, 0));
    io::write_json_file(ctx.file(".angles.json"), io::to_json(r.seq));
    const auto xs = targets::midpoint_grid(c.mse_points);
    std::vector<double> fx(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fx[i] = f(xs[i]);
    }
    const double m = bench::mse(qsp::expectation_grid(r.seq, xs), fx);
    io::write_json_file(ctx.file(".summary.json"),
                        {{"L", c.L},
                         {"loss", r.loss},
                         {"converged", r.converged},
                         {"iterations", r.iterations},
                         {"best_restart", r.best_restart},
                         {"restarts_run", r.restarts_run},
                         {"mse_noiseless", m},
                         {"parseval_floor", targets::parseval_tail(f, c.L) / kTwoPi}});
    ctx.log << "loss " << num(r.loss) << (r.converged ? " (converged)\n" : " (not converged)\n");
    if (!r.converged && !c.allow_unconverged) {
        throw qsp::TrainingFailure(r);
    }
}

void cmd_sweep(const Context &ctx, std::span<const int> layers) {
    const auto &c = ctx.cfg;
    auto opts = sweep_options(c, ctx.threads);
    if (!c.angles.empty()) {
        for (const auto &j : [&] {
                 const auto doc = io::read_json_file(c.angles);
                 return doc.is_array() ? doc : json::array({doc});
             }()) {
            auto s = io::angles_from_json(j);
            opts.pretrained.emplace(s.layers(), std::move(s));
        }
    }
    const auto r = bench::run_sweep(target(c), layers,
                                    bench::default_sweep_grid(c.grid_points),
                                    noise(c), opts);
    emit_sweep(ctx, r);
    if (c.command == "simulate" && !r.angles.empty()) {
        const auto prog = pulse::compile_circuit(r.angles.begin()->second, c.pulse_x, noise(c));
        std::ostringstream os;
        pulse::write_pulse_csv(os, prog);
        io::write_text_file(ctx.file(".pulses.csv"), os.str());
    }
    if (r.summary.size() != layers.size()) {
        throw ConvergenceError("one or more depths produced no circuit", 0.0);
    }
}

void cmd_coherence(const Context &ctx) {
    const auto &c = ctx.cfg;
    const auto seq = obtain_angles(ctx, c.L, false);
    const auto spec = noise(c);
    pulse::NoisyRunOptions ro;
    ro.dt = c.dt;
    ro.record_coherence = true;
    ro.coherence = coherence_options(c);
    const auto xs = targets::midpoint_grid(c.coherence_points);
    std::vector<pulse::NoisyRun> runs(xs.size());
    std::vector<std::vector<double>> free(xs.size());
    parallel_for(xs.size(), ctx.threads, [&](std::size_t i) {
        runs[i] = pulse::run_noisy_qsp(seq, xs[i], spec, ro);
        std::vector<double> times;
        for (const auto &l : runs[i].layers) {
            times.push_back(l.elapsed);
        }
        free[i] = pulse::free_coherence_trace(times, spec, ro.coherence);
    });
    std::ostringstream csv;
    csv << "x,layer,elapsed_s,coherence_qsp,coherence_free\n";
    bool holds = true;
    double min_ratio = INFINITY;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t k = 0; k < runs[i].layers.size(); ++k) {
            const auto &l = runs[i].layers[k];
            csv << num(xs[i]) << ',' << l.layer << ',' << num(l.elapsed) << ','
                << num(l.coherence) << ',' << num(free[i][k]) << '\n';
            if (k > 0) {
                holds = holds && l.coherence >= free[i][k];
                min_ratio = std::min(min_ratio, l.coherence / free[i][k]);
            }
        }
    }
    io::write_text_file(ctx.file(".csv"), csv.str());
    io::write_json_file(ctx.file(".summary.json"),
                        {{"L", c.L},
                         {"window", c.window},
                         {"points", xs.size()},
                         {"echo_holds", holds},
                         {"min_ratio", std::isfinite(min_ratio) ? json(min_ratio) : json(nullptr)}});
    ctx.log << "echo_holds " << (holds ? "true" : "false") << " min_ratio " << num(min_ratio) << '\n';
}

void cmd_ramsey(const Context &ctx) {
    const auto &c = ctx.cfg;
    const auto spec = noise(c);
    if (c.delays.empty()) {
        throw DomainError("ramsey needs at least one delay");
    }
    const auto phases = pulse::ramsey_phases(c.phases);
    std::vector<double> con(c.delays.size());
    parallel_for(c.delays.size(), ctx.threads, [&](std::size_t i) {
        con[i] = pulse::ramsey_contrast(c.delays[i], spec, phases);
    });
    std::ostringstream csv;
    csv << "delay_s,contrast\n";
    for (std::size_t i = 0; i < con.size(); ++i) {
        csv << num(c.delays[i]) << ',' << num(con[i]) << '\n';
    }
    io::write_text_file(ctx.file(".csv"), csv.str());
    json s = {{"delays_s", c.delays}, {"contrasts", con}, {"contrast", con.front()},
              {"analytic_rate", 0.5 * spec.dephasing}};
    const bool fit = c.delays.size() >= 2 &&
                     std::all_of(con.begin(), con.end(), [](double v) { return v > 0.0; });
    if (fit) {
        const double k = pulse::fit_decay_rate(c.delays, con);
        s["fitted_rate"] = k;
        s["fitted_time_constant_s"] = k > 0.0 ? json(1.0 / k) : json(nullptr);
        s["relative_error"] = spec.dephasing > 0.0 ? json(std::abs(k / (0.5 * spec.dephasing) - 1.0))
                                                   : json(nullptr);
        ctx.log << "fitted rate " << num(k) << " 1/s, analytic " << num(0.5 * spec.dephasing) << '\n';
    }
    io::write_json_file(ctx.file(".summary.json"), s);
    ctx.log << "contrast(" << num(c.delays.front()) << " s) = " << num(con.front()) << '\n';
}

qpp::QppCircuit qpp_circuit(const Context &ctx, int qubits) {
    return qpp::QppCircuit(obtain_angles(ctx, 2 * ctx.cfg.L, false), qubits);
}

void cmd_qpp_verify(const Context &ctx) {
    const auto &c = ctx.cfg;
    const auto f = target(c);
    const qpp::QppCircuit base = qpp_circuit(ctx, 1);
    const double eq = qpp::err_qsp(base, f, 10000);
    std::vector<double> ext(static_cast<std::size_t>(c.trials));
    std::vector<double> block(ext.size());
    std::vector<int> nq(ext.size());
    parallel_for(ext.size(), ctx.threads, [&](std::size_t t) {
        const int n = c.qubits > 0 ? c.qubits : 1 + static_cast<int>(t % 3);
        RngStream rng = RngStream(c.seed, 2).substream(t);
        const CMat u = random_unitary(1 << n, rng);
        const qpp::QppCircuit qc(base.base(), n);
        nq[t] = n;
        ext[t] = qpp::err_ext(qc, u, f).err_ext;
        block[t] = qpp::block_residual(qc, u);
    });
    // Saturating instance U' = e^{ix*} I at the worst grid point.
    const auto xs = targets::midpoint_grid(10000);
    const auto zs = qsp::expectation_grid(base.base(), xs);
    std::size_t worst = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::pow(f(xs[i]) - zs[i], 2) > std::pow(f(xs[worst]) - zs[worst], 2)) {
            worst = i;
        }
    }
    const int n_sat = c.qubits > 0 ? c.qubits : 1;
    CMat u_sat = CMat::identity(1 << n_sat);
    u_sat *= std::polar(1.0, xs[worst]);
    const auto sat = qpp::err_ext(qpp::QppCircuit(base.base(), n_sat), u_sat, f);
    io::write_json_file(ctx.file(".eigphase.json"), io::to_json(sat));

    const double mx = std::max(*std::max_element(ext.begin(), ext.end()), sat.err_ext);
    const double slack = 1e-6;
    const bool lower = mx >= eq / kTwoPi - slack;
    const bool upper = mx <= eq + slack;
    std::ostringstream csv;
    csv << "trial,qubits,err_ext,block_residual\n";
    for (std::size_t t = 0; t < ext.size(); ++t) {
        csv << t << ',' << nq[t] << ',' << num(ext[t]) << ',' << num(block[t]) << '\n';
    }
    io::write_text_file(ctx.file(".csv"), csv.str());
    io::write_json_file(ctx.file(".summary.json"),
                        {{"L", c.L},
                         {"err_qsp", eq},
                         {"lower_bound", eq / kTwoPi},
                         {"max_err_ext", mx},
                         {"max_err_ext_random", *std::max_element(ext.begin(), ext.end())},
                         {"saturating_err_ext", sat.err_ext},
                         {"x_star", xs[worst]},
                         {"max_block_residual", *std::max_element(block.begin(), block.end())},
                         {"lower_holds", lower},
                         {"upper_holds", upper},
                         {"sandwich_holds", lower && upper}});
    ctx.log << "err_qsp " << num(eq) << " max err_ext " << num(mx) << " sandwich_holds "
            << ((lower && upper) ? "true" : "false") << '\n';
}

void cmd_qpe(const Context &ctx) {
    const auto &c = ctx.cfg;
    const qpp::QppCircuit step = qpp_circuit(ctx, 1);
    struct Trial {
        double tau, est, err;
        bool ok;
        long queries;
    };
    std::vector<Trial> trials(static_cast<std::size_t>(c.trials));
    parallel_for(trials.size(), ctx.threads, [&](std::size_t t) {
        RngStream rng = RngStream(c.seed, 3).substream(t);
        const double tau = rng.uniform(0.0, kTwoPi);
        const CMat q = random_unitary(2, rng);
        const std::vector<cplx> d{std::polar(1.0, tau), std::polar(1.0, rng.uniform(0.0, kTwoPi))};
        const CMat u = matmul(matmul(q, CMat::diagonal(d)), q.adjoint());
        const std::vector<cplx> chi{q(0, 0), q(1, 0)};
        const auto r = qpp::qpe_binary_search(u, chi, c.delta, step, c.decision_shots, rng);
        const double e = qpp::circular_distance(r.estimate, tau);
        trials[t] = {tau, r.estimate, e, e <= c.delta, r.queries};
    });
    std::ostringstream csv;
    csv << "trial,tau,estimate,error,success,queries\n";
    int ok = 0;
    for (std::size_t t = 0; t < trials.size(); ++t) {
        const auto &tr = trials[t];
        ok += tr.ok ? 1 : 0;
        csv << t << ',' << num(tr.tau) << ',' << num(tr.est) << ',' << num(tr.err) << ','
            << (tr.ok ? 1 : 0) << ',' << tr.queries << '\n';
    }
    io::write_text_file(ctx.file(".csv"), csv.str());
    const int rounds = qpp::qpe_rounds(c.delta);
    const long expect = static_cast<long>(c.decision_shots) * rounds;
    const bool exact = std::all_of(trials.begin(), trials.end(),
                                   [&](const Trial &t) { return t.queries == expect; });
    io::write_json_file(ctx.file(".summary.json"),
                        {{"L", c.L},
                         {"delta", c.delta},
                         {"decision_shots", c.decision_shots},
                         {"rounds", rounds},
                         {"queries_per_trial", expect},
                         {"controlled_calls_per_trial", expect * 2L * c.L},
                         {"queries_exact", exact},
                         {"trials", c.trials},
                         {"successes", ok},
                         {"success_rate", static_cast<double>(ok) / c.trials}});
    ctx.log << "success " << ok << "/" << c.trials << '\n';
}

void cmd_toy_dephase(const Context &ctx) {
    const auto &c = ctx.cfg;
    const auto seq = obtain_angles(ctx, c.L, false);
    std::ostringstream csv;
    csv << "step,layer,p0,p1,purity\n";
    cplx p = 1.0;
    cplx q = 0.0;
    double min_purity = 1.0;
    int step = 0;
    for (int j = seq.layers(); j >= 0; --j, ++step) {
        const auto ju = static_cast<std::size_t>(j);
        const auto rho = pulse::toy_dephasing_step(p, q, seq.theta[ju], seq.phi[ju]);
        const double p0 = rho(0, 0).real();
        const double p1 = rho(1, 1).real();
        const double purity = p0 * p0 + p1 * p1;
        min_purity = std::min(min_purity, purity);
        csv << step << ',' << j << ',' << num(p0) << ',' << num(p1) << ',' << num(purity) << '\n';
        // Renormalise the diagonal state into amplitudes for the next layer.
        const double s = p0 + p1;
        p = std::sqrt(std::max(0.0, p0 / s));
        q = std::sqrt(std::max(0.0, p1 / s));
    }
    io::write_text_file(ctx.file(".csv"), csv.str());
    const double z = std::norm(p) - std::norm(q);
    io::write_json_file(ctx.file(".summary.json"),
                        {{"L", c.L},
                         {"final_p0", std::norm(p)},
                         {"final_p1", std::norm(q)},
                         {"z_toy", z},
                         {"z_ideal_x0", qsp::expectation_z(seq, 0.0)},
                         {"min_purity", min_purity},
                         {"distance_to_mixed", std::abs(std::norm(p) - 0.5)}});
    ctx.log << "toy <Z> " << num(z) << " min purity " << num(min_purity) << '\n';
}

} // namespace

std::filesystem::path run_command(const RunConfig &cfg, int threads, std::ostream &log) {
    cfg.validate();
    const Context ctx{cfg, resolve_threads(threads), log, cfg.artifact_dir()};
    std::filesystem::create_directories(ctx.dir);
    io::write_json_file(ctx.dir / "config.json", cfg.to_json());
    std::filesystem::remove(ctx.dir / "error.json");
    const auto &name = cfg.command;
    if (name == "train") {
        cmd_train(ctx);
    } else if (name == "simulate") {
        const int l[] = {cfg.L};
        cmd_sweep(ctx, l);
    } else if (name == "sweep") {
        cmd_sweep(ctx, cfg.layers);
    } else if (name == "coherence") {
        cmd_coherence(ctx);
    } else if (name == "ramsey") {
        cmd_ramsey(ctx);
    } else if (name == "qpp-verify") {
        cmd_qpp_verify(ctx);
    } else if (name == "qpe") {
        cmd_qpe(ctx);
    } else if (name == "toy-dephase") {
        cmd_toy_dephase(ctx);
    } else {
        throw DomainError("unknown command '" + name + "'");
    }
    log << "artifacts: " << ctx.dir.string() << '\n';
    return ctx.dir;
}

int exit_code_for(const std::exception &e) {
    if (const auto *q = dynamic_cast<const Error *>(&e)) {
        return static_cast<int>(q->kind());
    }
    if (dynamic_cast<const std::filesystem::filesystem_error *>(&e) ||
        dynamic_cast<const nlohmann::json::exception *>(&e)) {
        return static_cast<int>(ErrorKind::Config);
    }
    return static_cast<int>(ErrorKind::Numeric);
}

json error_json(const std::exception &e) {
    const int code = exit_code_for(e);
    const char *kind = code == 2 ? "config" : code == 3 ? "convergence" : "numeric";
    json j = {{"error", {{"kind", kind}, {"exit_code", code}, {"message", e.what()}}}};
    if (const auto *c = dynamic_cast<const ConvergenceError *>(&e)) {
        j["error"]["best_value"] = c->best_value;
    }
    return j;
}

} // namespace qspforge::cli
