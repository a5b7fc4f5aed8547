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

// Acceptance checks. Each criterion prints one PASS/FAIL line followed by
// its measured quantities.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "oracle/oracle.hpp"
#include "qspforge/bench.hpp"
#include "qspforge/parallel.hpp"
#include "qspforge/pulselab.hpp"
#include "qspforge/qppext.hpp"
#include "qspforge/qspcore.hpp"
#include "qspforge/targets.hpp"

#ifndef QSPFORGE_CLI_PATH
#define QSPFORGE_CLI_PATH "qspforge"
#endif

using namespace qspforge;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

qsp::AngleSequence random_seq(int layers, RngStream &rng) {
    auto s = qsp::AngleSequence::identity(layers);
    s.omega = rng.uniform(-kPi, kPi);
    for (int j = 0; j <= layers; ++j) {
        s.theta[j] = rng.uniform(-kPi, kPi);
        s.phi[j] = rng.uniform(-kPi, kPi);
    }
    return s;
}

qsp::AngleSequence train(const std::string &fn, int layers, int threads) {
    const auto F = bench::training_target(targets::make_target(fn), layers,
                                          bench::SweepOptions::default_fourier());
    auto cfg = bench::SweepOptions::default_train();
    cfg.threads = threads;
    return qsp::train_angles(F, layers, cfg, RngStream(1, 0)).seq;
}

Outcome closed_form(int) {
    auto s = qsp::AngleSequence::identity(1);
    s.theta = {-kPi / 2, kPi / 2};
    const auto xs = targets::periodic_grid(1000);
    double dev = 0.0;
    for (double x : xs) {
        dev = std::max(dev, std::abs(qsp::expectation_z(s, x) - std::cos(x)));
    }
    return {dev < 1e-10, "max|<Z> - cos x| = " + sci(dev) + " over 1000 points"};
}

Outcome structure(int) {
    RngStream rng(2, 0);
    double unit = 0.0, norm = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const auto s = random_seq(1 + t % 16, rng);
        const double x = rng.uniform(-kPi, kPi);
        unit = std::max(unit, unitarity_residual(qsp::evaluate_unitary(s, x)));
        const auto [p, q] = qsp::extract_pq(s, x);
        norm = std::max(norm, std::abs(std::norm(p) + std::norm(q) - 1.0));
    }
    double fit = 0.0;
    for (int t = 0; t < 50; ++t) {
        const int L = 1 + t % 20;
        const auto s = random_seq(L, rng);
        const int n = 4 * L + 4;
        const auto grid = targets::periodic_grid(n);
        const auto z = qsp::expectation_grid(s, grid);
        std::vector<cplx> c(static_cast<std::size_t>(2 * L + 1));
        for (int k = -L; k <= L; ++k) {
            cplx acc{};
            for (int i = 0; i < n; ++i) {
                acc += z[static_cast<std::size_t>(i)] * std::polar(1.0, -k * grid[static_cast<std::size_t>(i)]);
            }
            c[static_cast<std::size_t>(k + L)] = acc / static_cast<double>(n);
        }
        for (int i = 0; i < 64; ++i) {
            const double x = rng.uniform(-kPi, kPi);
            cplx v{};
            for (int k = -L; k <= L; ++k) {
                v += c[static_cast<std::size_t>(k + L)] * std::polar(1.0, k * x);
            }
            fit = std::max(fit, std::abs(v.real() - qsp::expectation_z(s, x)));
        }
    }
    return {unit < 1e-10 && norm < 1e-9 && fit < 1e-8,
            "unitarity " + sci(unit) + ", |P|^2+|Q|^2-1 " + sci(norm) + ", degree-L fit " + sci(fit)};
}

Outcome fourier_convergence(int threads) {
    bench::SweepOptions o;
    o.noisy = false;
    o.threads = threads;
    const std::vector<int> layers{15, 30, 60, 120};
    const auto r = bench::run_sweep(targets::make_target("selu"), layers,
                                    bench::default_sweep_grid(), pulse::NoiseSpec::noiseless(), o);
    bool ok = r.summary.size() == layers.size();
    std::string d;
    for (std::size_t i = 0; ok && i < r.summary.size(); ++i) {
        const auto &s = r.summary[i];
        ok = ok && s.mse_noiseless <= 2 * s.parseval_floor + 1e-8;
        if (i > 0) {
            ok = ok && s.mse_noiseless < r.summary[i - 1].mse_noiseless;
        }
        d += "L=" + std::to_string(s.layers) + " mse " + sci(s.mse_noiseless) + " floor " +
             sci(s.parseval_floor) + (i + 1 < r.summary.size() ? "; " : "");
    }
    return {ok, d};
}

Outcome sandwich(int) {
    const auto f = targets::make_target("selu");
    const qpp::QppCircuit base(train("selu", 30, 1), 1);
    const double eq = qpp::err_qsp(base, f, 10000);
    double mx = 0.0, blk = 0.0;
    for (int t = 0; t < 50; ++t) {
        const int n = 1 + t % 3;
        RngStream rng = RngStream(1, 2).substream(static_cast<std::uint64_t>(t));
        const CMat u = random_unitary(1 << n, rng);
        const qpp::QppCircuit c(base.base(), n);
        mx = std::max(mx, qpp::err_ext(c, u, f).err_ext);
        blk = std::max(blk, qpp::block_residual(c, u));
    }
    const double random_max = mx;
    const auto xs = targets::midpoint_grid(10000);
    const auto zs = qsp::expectation_grid(base.base(), xs);
    std::size_t w = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(f(xs[i]) - zs[i]) > std::abs(f(xs[w]) - zs[w])) {
            w = i;
        }
    }
    CMat sat = CMat::identity(2);
    sat *= std::polar(1.0, xs[w]);
    mx = std::max(mx, qpp::err_ext(base, sat, f).err_ext);
    const bool lower = mx >= eq / kTwoPi - 1e-6;
    const bool upper = mx <= eq + 1e-6;
    return {lower && upper,
            "err_qsp " + sci(eq) + ", err_qsp/2pi " + sci(eq / kTwoPi) + ", max err_ext " +
                sci(mx) + " (random U " + sci(random_max) + ", saturating at x* = " +
                fmt("%.4f", xs[w]) + "), lower " + (lower ? "holds" : "fails") + ", upper " +
                (upper ? "holds" : "fails") + ", block residual " + sci(blk)};
}

Outcome mse_to_err(int) {
    const auto f = targets::make_target("selu");
    const auto seq = train("selu", 30, 1);
    const auto diff2 = [&](double x) {
        const double e = f(x) - qsp::expectation_z(seq, x);
        return e * e;
    };
    const double err = oracle::integrate(diff2, -kPi, 0.0) + oracle::integrate(diff2, 0.0, kPi);
    const int n = 10000;
    auto sampled = [&](const std::vector<double> &xs) {
        std::vector<double> fx(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            fx[i] = f(xs[i]);
        }
        return kTwoPi * bench::mse(qsp::expectation_grid(seq, xs), fx);
    };
    std::vector<double> closed(n);
    for (int i = 0; i < n; ++i) {
        closed[static_cast<std::size_t>(i)] = -kPi + kTwoPi * i / (n - 1);
    }
    const double mid = sampled(targets::midpoint_grid(n));
    const double ends = sampled(closed);
    const double rel = std::abs(mid - err) / err;
    return {std::abs(mid - err) <= 0.01 * err + 1e-8,
            "2pi*mse " + sci(mid) + " (cell centres), err_qsp " + sci(err) + ", relative gap " +
                sci(rel) + "; endpoint-inclusive grid gives " + sci(ends) + " (gap " +
                sci(std::abs(ends - err) / err) + ")"};
}

Outcome kink(int threads) {
    bench::SweepOptions o;
    o.threads = threads;
    const std::vector<int> layers{15, 60, 120, 180, 240, 300, 360};
    const auto r = bench::run_sweep(targets::make_target("step"), layers,
                                    bench::default_sweep_grid(31), pulse::NoiseSpec::standard(), o);
    if (r.summary.size() != layers.size()) {
        return {false, "sweep lost depths"};
    }
    std::size_t best = 0;
    std::string d;
    for (std::size_t i = 0; i < r.summary.size(); ++i) {
        if (*r.summary[i].mse_noisy < *r.summary[best].mse_noisy) {
            best = i;
        }
        d += "L=" + std::to_string(r.summary[i].layers) + " " + sci(*r.summary[i].mse_noisy) + "; ";
    }
    const double m15 = *r.summary.front().mse_noisy;
    const double m360 = *r.summary.back().mse_noisy;
    const double mb = *r.summary[best].mse_noisy;
    d += "minimum at L=" + std::to_string(r.summary[best].layers);
    return {mb < m15 && m360 > mb, d};
}

Outcome operational(int threads) {
    const auto f = targets::make_target("step");
    const auto seq = train("step", 60, threads);
    const auto xs = targets::midpoint_grid(1000);
    std::vector<double> fx(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fx[i] = f(xs[i]);
    }
    auto run = [&](double err) {
        auto spec = pulse::NoiseSpec::noiseless();
        spec.op_err = err;
        std::vector<double> z(xs.size());
        parallel_for(xs.size(), threads, [&](std::size_t i) {
            z[i] = pulse::run_noisy_qsp(seq, xs[i], spec).expectation;
        });
        return bench::mse(z, fx);
    };
    const double m0 = run(0.0), m1 = run(0.001), m2 = run(0.1);
    const double rel = std::abs(m1 - m0) / m0;
    const bool small = rel <= 0.10;
    const bool decade = m2 < 10 * m0 && m2 > 0.1 * m0;
    return {small && decade,
            "mse(0) " + sci(m0) + ", mse(0.001) " + sci(m1) + " (relative change " +
                fmt("%.1f%%", 100 * rel) + (small ? ", ok" : ", exceeds 10%") + "), mse(0.1) " +
                sci(m2) + " (ratio " + fmt("%.2f", m2 / m0) + (decade ? ", same decade)" : ", off decade)")};
}

Outcome echo(int threads) {
    const auto seq = train("step", 60, threads);
    const auto spec = pulse::NoiseSpec::standard();
    pulse::NoisyRunOptions ro;
    ro.record_coherence = true;
    ro.coherence.window = pulse::CoherenceWindow::Driven;
    const auto xs = targets::midpoint_grid(6);
    bool holds = true;
    double ratio = INFINITY;
    int samples = 0;
    for (double x : xs) {
        const auto run = pulse::run_noisy_qsp(seq, x, spec, ro);
        std::vector<double> times;
        for (const auto &l : run.layers) {
            times.push_back(l.elapsed);
        }
        const auto free = pulse::free_coherence_trace(times, spec, ro.coherence);
        for (std::size_t k = 1; k < run.layers.size(); ++k) {
            holds = holds && run.layers[k].coherence >= free[k];
            ratio = std::min(ratio, run.layers[k].coherence / free[k]);
            ++samples;
        }
    }
    return {holds, std::to_string(samples) + " sampled times over 6 signals, min driven/free ratio " +
                       fmt("%.6f", ratio)};
}

Outcome ramsey(int) {
    const auto spec = pulse::NoiseSpec::standard();
    const auto phases = pulse::ramsey_phases();
    std::vector<double> delays, c;
    for (int i = 0; i <= 20; ++i) {
        delays.push_back(2e-3 * i);
        c.push_back(pulse::ramsey_contrast(delays.back(), spec, phases));
    }
    const double k = pulse::fit_decay_rate(delays, c);
    const double want = spec.dephasing / 2;
    const double rel = std::abs(k / want - 1);
    return {rel <= 0.05 && std::abs(c.front() - 1.0) <= 1e-6,
            "fitted rate " + fmt("%.4f", k) + " 1/s, analytic " + fmt("%.4f", want) +
                " 1/s (relative " + sci(rel) + "), time constant " + fmt("%.2f ms", 1e3 / k) +
                ", C(0) - 1 = " + sci(c.front() - 1.0)};
}

Outcome qpe(int threads) {
    const int pairs = 120;
    const qpp::QppCircuit step(train("step", 2 * pairs, threads), 1);
    const double delta = kTwoPi / 256;
    const int shots = 15, trials = 50;
    const int rounds = qpp::qpe_rounds(delta);
    std::vector<int> ok(trials);
    std::vector<char> exact(trials);
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        RngStream rng = RngStream(1, 3).substream(t);
        const double tau = rng.uniform(0.0, kTwoPi);
        const CMat q = random_unitary(2, rng);
        const std::vector<cplx> d{std::polar(1.0, tau), std::polar(1.0, rng.uniform(0.0, kTwoPi))};
        const CMat u = matmul(matmul(q, CMat::diagonal(d)), q.adjoint());
        const std::vector<cplx> chi{q(0, 0), q(1, 0)};
        const auto r = qpp::qpe_binary_search(u, chi, delta, step, shots, rng);
        ok[t] = qpp::circular_distance(r.estimate, tau) <= delta ? 1 : 0;
        exact[t] = r.queries == static_cast<long>(shots) * rounds &&
                   r.controlled_calls == r.queries * 2L * pairs;
    });
    int wins = 0;
    bool counts = true;
    for (int t = 0; t < trials; ++t) {
        wins += ok[static_cast<std::size_t>(t)];
        counts = counts && exact[static_cast<std::size_t>(t)];
    }
    const double rate = static_cast<double>(wins) / trials;
    return {rate >= 0.9 && counts,
            std::to_string(wins) + "/" + std::to_string(trials) + " within delta, " +
                std::to_string(rounds) + " rounds x " + std::to_string(shots) + " shots = " +
                std::to_string(rounds * shots) + " queries" + (counts ? " (exact)" : " (mismatch)")};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path only_subdir(const fs::path &root) {
    for (const auto &e : fs::directory_iterator(root)) {
        if (e.is_directory()) {
            return e.path();
        }
    }
    return {};
}

Outcome determinism(int) {
    const std::map<std::string, std::string> runs{
        {"train", "--function selu -L 20"},
        {"simulate", "--function step -L 15 --pulse-x 0.7"},
        {"sweep", "--function step --layers 15,30 --grid-points 9"},
        {"coherence", "--function step -L 15 --coherence-points 2"},
        {"ramsey", ""},
        {"qpp-verify", "--function selu -L 8 --trials 6"},
        {"qpe", "-L 30 --trials 4"},
        {"toy-dephase", "-L 10"},
    };
    const fs::path root = fs::temp_directory_path() / "qspforge-acceptance";
    fs::remove_all(root);
    std::vector<std::string> bad;
    int files = 0;
    for (const auto &[cmd, args] : runs) {
        const fs::path out = root / cmd;
        const std::string base = std::string("\"") + QSPFORGE_CLI_PATH + "\" " + cmd;
        if (std::system((base + " " + args + " --out \"" + out.string() + "\" > /dev/null").c_str()) != 0) {
            bad.push_back(cmd + " (first run failed)");
            continue;
        }
        const fs::path dir = only_subdir(out);
        const fs::path kept = root / (cmd + ".first");
        fs::rename(dir, kept);
        if (std::system((base + " --config \"" + (kept / "config.json").string() + "\" > /dev/null").c_str()) != 0) {
            bad.push_back(cmd + " (rerun failed)");
            continue;
        }
        for (const auto &e : fs::directory_iterator(kept)) {
            ++files;
            const fs::path other = dir / e.path().filename();
            if (!fs::exists(other) || slurp(other) != slurp(e.path())) {
                bad.push_back(cmd + ":" + e.path().filename().string());
            }
        }
    }
    fs::remove_all(root);
    std::string d = std::to_string(runs.size()) + " commands, " + std::to_string(files) + " artifacts compared";
    for (const auto &b : bad) {
        d += "; differs: " + b;
    }
    return {bad.empty(), d};
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qspforge acceptance checks"};
    int only = 0;
    int threads = 0;
    app.add_option("--criterion", only, "run one criterion (1-11)");
    app.add_option("--threads", threads, "worker threads (0 = hardware)");
    CLI11_PARSE(app, argc, argv);
    if (threads <= 0) {
        threads = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
    }
    const std::vector<std::pair<std::string, std::function<Outcome(int)>>> checks{
        {"closed-form cos circuit", closed_form},
        {"unitary and polynomial structure", structure},
        {"fourier convergence of selu to the parseval floor", fourier_convergence},
        {"eigenphase error sandwich", sandwich},
        {"discrete mse approximates the integral error", mse_to_err},
        {"dephasing produces an interior mse minimum", kink},
        {"operational error robustness", operational},
        {"echo: driven coherence exceeds free coherence", echo},
        {"ramsey contrast decay", ramsey},
        {"binary-search phase estimation", qpe},
        {"cli reruns are byte identical", determinism},
    };
    if (only < 0 || only > static_cast<int>(checks.size())) {
        std::cerr << "criterion must be 1.." << checks.size() << '\n';
        return 2;
    }
    int failed = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        if (only != 0 && static_cast<int>(i) + 1 != only) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = checks[i].second(threads);
        } catch (const std::exception &e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu: %s  %s | %s [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL",
                    checks[i].first.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
