// Copyright 2026 The dynmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the nine acceptance checks and prints one PASS/FAIL line for each.
// Exit status is 0 only when all nine pass.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "dynmatch/cli.hpp"
#include "dynmatch/harness.hpp"
#include "dynmatch/matching_engine.hpp"
#include "dynmatch/workload.hpp"

namespace {

using namespace dynmatch;
namespace fs = std::filesystem;
using harness::WorkloadKind;
using harness::WorkloadParams;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct SuiteCase {
    WorkloadParams params;
    VertexId n = 0;
    std::int64_t t = 0;
    std::uint64_t seed = 0;
};

// 100 configurations times 10 seeds. The configuration index picks the
// workload (cycling), n in [8, 40], t in {500, ..., 2000} and the
// family parameter, with p_delete ranging over {0.2, 0.5, 0.8}.
std::vector<SuiteCase> correctness_cases() {
    const double p_values[] = {0.2, 0.5, 0.8};
    const double hub_values[] = {0.0, 0.05, 0.1};
    const std::int64_t windows[] = {1, 8, 32};
    std::vector<SuiteCase> cases;
    for (int c = 0; c < 100; ++c) {
        SuiteCase base;
        base.n = 8 + (c * 7) % 33;
        base.t = 500 + (c % 4) * 500;
        const int k = (c / 3) % 3;
        base.params.kind = static_cast<WorkloadKind>(c % 3);
        base.params.p_delete = p_values[k];
        base.params.hub_fraction = hub_values[k];
        const std::int64_t pairs = static_cast<std::int64_t>(base.n) * (base.n - 1) / 2;
        base.params.window = std::min(windows[k], pairs);
        for (std::uint64_t s = 1; s <= 10; ++s) {
            SuiteCase sc = base;
            sc.seed = static_cast<std::uint64_t>(c) * 1000 + s;
            cases.push_back(sc);
        }
    }
    return cases;
}

struct CorrectnessTally {
    std::size_t runs = 0;
    std::size_t failures = 0;
    std::size_t assertion_failures = 0;
    std::size_t checks = 0;
    std::size_t capped_runs = 0;
    std::size_t cap_exceeded = 0;
    std::uint64_t induced_at_cap = 0;
    std::size_t space_checks = 0;
    std::size_t space_violations = 0;
    std::string first_failure;
    std::string first_space_violation;
};

CorrectnessTally run_correctness_suite() {
    CorrectnessTally tally;
    for (const SuiteCase& sc : correctness_cases()) {
        const Trace tr = harness::generate(sc.params, sc.n, sc.t, sc.seed);
        for (LevelMode mode : {LevelMode::kUncapped, LevelMode::kCapped}) {
            const EngineConfig cfg = harness::make_config(mode, sc.seed, tr.size());
            harness::VerifyOptions vo;
            vo.check_every = 1;
            vo.on_step = [&](std::uint64_t step, const MatchingEngine& e) {
                if (step % 100 != 0) return;
                ++tally.space_checks;
                const SpaceUsage s = e.graph().space_usage();
                const std::size_t m = e.graph().num_edges();
                if (s.list_entries() != 2 * m || s.buckets > m) {
                    if (tally.space_violations++ == 0) {
                        tally.first_space_violation =
                            fmt::format("step {}: {} entries, {} buckets, {} edges", step, s.list_entries(),
                                        s.buckets, m);
                    }
                }
            };
            const harness::VerifyResult r = harness::verify_trace(tr, cfg, vo);
            ++tally.runs;
            tally.checks += r.checks;
            if (!r.passed) {
                if (tally.failures++ == 0) {
                    tally.first_failure = fmt::format("{} n={} seed={} mode={} step {}: {} ({})",
                                                      harness::to_string(sc.params.kind), sc.n, sc.seed,
                                                      mode == LevelMode::kCapped ? "capped" : "uncapped",
                                                      r.failed_step, r.invariant, r.detail);
                }
                if (r.assertion) ++tally.assertion_failures;
                continue;
            }
            if (mode == LevelMode::kCapped) {
                ++tally.capped_runs;
                if (r.metrics.max_level > cfg.level_cap) ++tally.cap_exceeded;
                tally.induced_at_cap += r.metrics.induced_at_level_limit;
            }
        }
    }
    return tally;
}

Outcome approximation_suite() {
    std::size_t traces = 0, checks = 0, failures = 0;
    double worst = 0;
    std::string first;
    for (int c = 0; c < 20; ++c) {
        WorkloadParams w;
        w.kind = static_cast<WorkloadKind>(c % 3);
        w.p_delete = 0.2 + 0.3 * (c % 3);
        w.hub_fraction = 0.1 * (c % 2);
        const VertexId n = 6 + c % 13;  // 6 .. 18
        w.window = std::min<std::int64_t>(4 + c, n * (n - 1) / 2);
        for (std::uint64_t s = 1; s <= 10; ++s) {
            const std::uint64_t seed = 50000 + static_cast<std::uint64_t>(c) * 100 + s;
            const Trace tr = harness::generate(w, n, 1000, seed);
            const LevelMode mode = s % 2 ? LevelMode::kUncapped : LevelMode::kCapped;
            harness::VerifyOptions vo;
            vo.check_every = 25;
            vo.approx_every = 25;
            const harness::VerifyResult r = harness::verify_trace(tr, harness::make_config(mode, seed, tr.size()), vo);
            ++traces;
            checks += r.approx_checks;
            worst = std::max(worst, r.worst_ratio);
            if (!r.passed && failures++ == 0) first = fmt::format("n={} seed={}: {} ({})", n, seed, r.invariant, r.detail);
        }
    }
    Outcome o;
    o.pass = failures == 0 && traces == 200;
    o.detail = fmt::format("{} traces, {} approximation checks, worst opt/|M| = {:.3f}, {} violations{}", traces,
                           checks, worst, failures, first.empty() ? "" : "; first: " + first);
    return o;
}

struct SweepResult {
    std::vector<harness::BenchSummaryRow> random;
    std::vector<harness::BenchSummaryRow> skew;
};

SweepResult bench_sweep() {
    SweepResult sr;
    harness::BenchOptions opts;
    opts.sizes = {1 << 10, 1 << 13, 1 << 16};
    opts.t_multiplier = 20;
    opts.seeds = 5;
    opts.workload.kind = WorkloadKind::kRandom;
    opts.workload.p_delete = 0.3;
    opts.run_naive = false;
    sr.random = harness::summarize(harness::bench(opts));

    harness::BenchOptions skew = opts;
    skew.workload.kind = WorkloadKind::kSkewStar;
    skew.workload.hub_fraction = 0.0;
    skew.seeds = 1;
    skew.run_naive = true;
    sr.skew = harness::summarize(harness::bench(skew));
    return sr;
}

Outcome constant_work(const SweepResult& sr) {
    const double lo = sr.random.front().engine_work_per_update;
    const double hi = sr.random.back().engine_work_per_update;
    const double growth = hi / lo;
    const double naive_growth = sr.skew.back().naive_work_per_update / sr.skew.front().naive_work_per_update;
    const double engine_skew_growth = sr.skew.back().engine_work_per_update / sr.skew.front().engine_work_per_update;
    Outcome o;
    o.pass = growth <= 1.5 && naive_growth >= 5.0;
    o.detail = fmt::format(
        "random work/update {:.3f} -> {:.3f} (x{:.3f}, need <= 1.5); skew_star naive {:.2f} -> {:.2f} (x{:.2f}, "
        "need >= 5), engine x{:.3f}",
        lo, hi, growth, sr.skew.front().naive_work_per_update, sr.skew.back().naive_work_per_update, naive_growth,
        engine_skew_growth);
    return o;
}

Outcome epoch_cost(const SweepResult& sr) {
    const double lo = sr.random.front().max_rollup_ratio;
    const double hi = sr.random.back().max_rollup_ratio;
    Outcome o;
    o.pass = lo > 0 && hi <= 1.25 * lo;
    o.detail = fmt::format("max rollup / 3^level {:.2f} at n=2^10, {:.2f} at n=2^16 (x{:.3f}, need <= 1.25)", lo, hi,
                           lo > 0 ? hi / lo : 0.0);
    return o;
}

Outcome duration_uniformity_check() {
    std::vector<DurationSample> pooled;
    std::vector<DurationSample> pooled_all;
    for (std::uint64_t s = 1; s <= 10; ++s) {
        const Trace tr = append_teardown(gen_random(1000, 20000, 0.2, 70000 + s));
        EngineConfig cfg;
        cfg.rng_seed = s;
        cfg.deep_tracking = true;
        MatchingEngine e(tr.n, cfg);
        for (const UpdateEvent& ev : tr.events) e.apply(ev);
        const auto natural = duration_samples(e.ledger(), true);
        pooled.insert(pooled.end(), natural.begin(), natural.end());
        const auto all = duration_samples(e.ledger(), false);
        pooled_all.insert(pooled_all.end(), all.begin(), all.end());
    }
    const UniformityTest t = duration_uniformity(pooled);
    const UniformityTest all = duration_uniformity(pooled_all);
    Outcome o;
    o.pass = t.samples >= 1000 && t.p_value >= 0.01;
    o.detail = fmt::format("{} natural level>=1 epochs, chi2 = {:.2f} (df {}), p = {:.4f}, need p >= 0.01; "
                           "all {} random epochs p = {:.4f}",
                           t.samples, t.chi_square, t.degrees_of_freedom, t.p_value, all.samples, all.p_value);
    return o;
}

Outcome determinism_check() {
    const fs::path dir = fs::temp_directory_path() / "dynmatch_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::size_t identical = 0;
    std::string first;
    const char* kinds[] = {"random", "skew_star", "sliding_window"};
    for (int c = 0; c < 20; ++c) {
        const std::string trace = (dir / fmt::format("c{}.trace", c)).string();
        const std::string n = std::to_string(50 + 40 * c);
        const std::vector<std::string> gen = {"dynmatch",  "gen", "--workload", kinds[c % 3], "--n", n, "--t",
                                              "4000",      "--hub-fraction", "0.02", "--workload-seed",
                                              std::to_string(c + 1), "--out", trace};
        std::vector<std::string> run = {"dynmatch", "run", "--trace", trace, "--seed", std::to_string(c * 13 + 1),
                                        "--format", c % 2 ? "json" : "text"};
        if (c % 4 == 3) run.insert(run.end(), {"--mode", "capped"});
        if (c % 5 == 4) run.push_back("--deep-tracking");
        auto call = [](const std::vector<std::string>& args, std::string* out) {
            std::vector<const char*> argv;
            for (const std::string& a : args) argv.push_back(a.c_str());
            std::ostringstream os, es;
            const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), os, es);
            if (out != nullptr) *out = os.str();
            return code;
        };
        std::string a, b;
        if (call(gen, nullptr) != 0 || call(run, &a) != 0 || call(run, &b) != 0) {
            if (first.empty()) first = fmt::format("configuration {} did not run", c);
            continue;
        }
        const bool json = c % 2 == 1;
        if (cli::strip_timing(a, json) == cli::strip_timing(b, json) && a.size() > 0) {
            ++identical;
        } else if (first.empty()) {
            first = fmt::format("configuration {} differs", c);
        }
    }
    fs::remove_all(dir);
    Outcome o;
    o.pass = identical == 20;
    o.detail = fmt::format("{}/20 configurations reproduce byte-for-byte without timing{}", identical,
                           first.empty() ? "" : "; " + first);
    return o;
}

void report(int id, const std::string& name, const Outcome& o, double seconds, int& failed) {
    if (!o.pass) ++failed;
    std::cout << fmt::format("[{}] {} {}: {} ({:.1f}s)", o.pass ? "PASS" : "FAIL", id, name, o.detail, seconds)
              << std::endl;
}

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
    int failed = 0;
    auto t0 = std::chrono::steady_clock::now();
    const CorrectnessTally c = run_correctness_suite();
    const double suite_seconds = since(t0);

    Outcome c1;
    c1.pass = c.failures == 0 && c.runs == 2000;
    c1.detail = fmt::format("{} traces x 2 modes = {} runs, {} full checks, {} failures{}", c.runs / 2, c.runs,
                            c.checks, c.failures, c.first_failure.empty() ? "" : "; first: " + c.first_failure);
    report(1, "correctness", c1, suite_seconds, failed);

    t0 = std::chrono::steady_clock::now();
    const Outcome c2 = approximation_suite();
    report(2, "2-approximation", c2, since(t0), failed);

    t0 = std::chrono::steady_clock::now();
    const SweepResult sweep = bench_sweep();
    const double sweep_seconds = since(t0);
    report(3, "constant amortized work", constant_work(sweep), sweep_seconds, failed);
    report(4, "epoch cost bound", epoch_cost(sweep), 0.0, failed);

    Outcome c5;
    c5.pass = c.assertion_failures == 0 && c.runs == 2000;
    c5.detail = fmt::format("{} runtime assertion failures over {} runs", c.assertion_failures, c.runs);
    report(5, "rising-mechanism assertions", c5, 0.0, failed);

    t0 = std::chrono::steady_clock::now();
    const Outcome c6 = duration_uniformity_check();
    report(6, "duration uniformity", c6, since(t0), failed);

    Outcome c7;
    c7.pass = c.capped_runs == 1000 && c.cap_exceeded == 0 && c.induced_at_cap == 0;
    c7.detail = fmt::format("{} capped runs, {} above the cap, {} induced terminations at the cap", c.capped_runs,
                            c.cap_exceeded, c.induced_at_cap);
    report(7, "capped mode", c7, 0.0, failed);

    Outcome c8;
    c8.pass = c.space_checks > 0 && c.space_violations == 0;
    c8.detail = fmt::format("{} space checks, {} violations{}", c.space_checks, c.space_violations,
                            c.first_space_violation.empty() ? "" : "; first: " + c.first_space_violation);
    report(8, "space linearity", c8, 0.0, failed);

    t0 = std::chrono::steady_clock::now();
    const Outcome c9 = determinism_check();
    report(9, "determinism", c9, since(t0), failed);

    std::cout << (failed == 0 ? "all 9 criteria passed" : fmt::format("{} of 9 criteria failed", failed))
              << std::endl;
    return failed == 0 ? 0 : 1;
}
