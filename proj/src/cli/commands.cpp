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

#include "dynmatch/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynmatch/harness.hpp"
#include "dynmatch/oracle.hpp"
#include "dynmatch/workload.hpp"

namespace dynmatch::cli {

namespace {

namespace fs = std::filesystem;
using harness::WorkloadKind;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EngineFlags {
    std::uint64_t seed = 1;
    std::string mode = "uncapped";
    std::optional<Level> cap;
    std::optional<std::uint64_t> width;
    bool deep_tracking = false;

    void attach(CLI::App* cmd, bool with_deep) {
        cmd->add_option("--seed", seed, "Engine random seed")->capture_default_str();
        cmd->add_option("--mode", mode, "Level mode")
            ->check(CLI::IsMember({"uncapped", "capped"}))
            ->capture_default_str();
        cmd->add_option("--cap", cap, "Level cap (capped mode; default from trace length)");
        cmd->add_option("--cap-sample-width", width,
                        "Outgoing positions sampled at the cap (capped mode; default from trace length)");
        if (with_deep) cmd->add_flag("--deep-tracking", deep_tracking, "Record candidate snapshots");
    }

    EngineConfig config(std::uint64_t t) const {
        const LevelMode m = mode == "capped" ? LevelMode::kCapped : LevelMode::kUncapped;
        if (m == LevelMode::kUncapped && (cap || width)) {
            throw UsageError("--cap and --cap-sample-width need --mode capped");
        }
        return harness::make_config(m, seed, t, cap, width, deep_tracking);
    }
};

struct ReportFlags {
    std::string path;
    std::string format = "text";

    void attach(CLI::App* cmd) {
        cmd->add_option("--report", path,
                        std::string("Report file (default: stdout); relative paths resolve against $") +
                            kReportDirEnv + " when set");
        cmd->add_option("--format", format, "Report format")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
    }
    bool json() const { return format == "json"; }

    void emit(const std::string& text, const nlohmann::json& doc, std::ostream& out) const {
        const std::string body = json() ? doc.dump(2) + "\n" : text;
        if (path.empty()) {
            out << body;
            return;
        }
        fs::path target(path);
        if (target.is_relative()) {
            if (const char* dir = std::getenv(kReportDirEnv); dir != nullptr && *dir != '\0') {
                target = fs::path(dir) / target;
            }
        }
        std::ofstream f(target, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write report " + target.string());
        f << body;
        if (!f) throw std::runtime_error("failed writing report " + target.string());
        out << "report written to " << target.string() << '\n';
    }
};

Trace load(const std::string& path, double* seconds) {
    const auto start = std::chrono::steady_clock::now();
    Trace tr = read_trace_file(path);
    if (seconds != nullptr) {
        *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return tr;
}

}  // namespace

std::string strip_timing(const std::string& report, bool json) {
    if (json) {
        nlohmann::json doc = nlohmann::json::parse(report);
        doc.erase("timing");
        return doc.dump(2);
    }
    std::istringstream in(report);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (line.rfind("timing.", 0) == 0) continue;
        out += line;
        out += '\n';
    }
    return out;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fully dynamic maximal matching: replay, verification and measurement"};
    app.name("dynmatch");
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a trace file");
    std::string gen_kind = "random";
    VertexId gen_n = 40;
    std::int64_t gen_t = 2000;
    double gen_p = 0.5;
    double gen_hub = 0.05;
    std::int64_t gen_window = 64;
    std::uint64_t gen_seed = 1;
    bool gen_teardown = false;
    std::string gen_out = "-";
    gen->add_option("--workload,--kind", gen_kind, "Workload family")
        ->check(CLI::IsMember({"random", "skew_star", "sliding_window"}))
        ->capture_default_str();
    gen->add_option("--n", gen_n, "Vertex count")->capture_default_str();
    gen->add_option("--t", gen_t, "Number of updates (before teardown)")->capture_default_str();
    gen->add_option("--p-delete", gen_p, "Deletion probability (random)")->capture_default_str();
    gen->add_option("--hub-fraction", gen_hub, "Fraction of hub vertices (skew_star)")->capture_default_str();
    gen->add_option("--window", gen_window, "Edge lifetime in steps (sliding_window)")->capture_default_str();
    gen->add_option("--workload-seed", gen_seed, "Workload random seed")->capture_default_str();
    gen->add_flag("--teardown", gen_teardown, "Append deletions of all remaining edges");
    gen->add_option("--out", gen_out, "Output path, '-' for stdout")->capture_default_str();

    // run
    auto* run = app.add_subcommand("run", "Replay a trace through the engine and report metrics");
    std::string run_trace_path;
    EngineFlags run_engine;
    ReportFlags run_report;
    run->add_option("--trace", run_trace_path, "Trace file")->required();
    run_engine.attach(run, true);
    run_report.attach(run);

    // verify
    auto* verify = app.add_subcommand("verify", "Replay a trace and check invariants against the oracles");
    std::string verify_trace_path;
    EngineFlags verify_engine;
    ReportFlags verify_report;
    std::uint64_t check_every = 1;
    bool approx = false;
    std::optional<std::uint64_t> inject_fault;
    verify->add_option("--trace", verify_trace_path, "Trace file")->required();
    verify_engine.attach(verify, false);
    verify_report.attach(verify);
    verify->add_option("--check-every", check_every, "Check cadence in steps")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    verify->add_flag("--approx", approx, "Also compare against the exact maximum matching (small n)");
    verify->add_option("--inject-fault", inject_fault)->group("");

    // bench
    auto* bench = app.add_subcommand("bench", "Scaling sweep of engine and simple maintainer");
    harness::BenchOptions bopts;
    bopts.sizes = {1 << 10, 1 << 13, 1 << 16};
    std::string bench_workload = "random";
    std::string bench_mode = "uncapped";
    bool no_naive = false;
    ReportFlags bench_report;
    bench->add_option("--sizes", bopts.sizes, "Vertex counts, ascending")->delimiter(',')->capture_default_str();
    bench->add_option("--t-multiplier", bopts.t_multiplier, "Updates per vertex")->capture_default_str();
    bench->add_option("--seeds", bopts.seeds, "Seeds per size")->capture_default_str();
    bench->add_option("--seed", bopts.engine_seed, "Base engine seed")->capture_default_str();
    bench->add_option("--workload-seed", bopts.workload_seed, "Base workload seed")->capture_default_str();
    bench->add_option("--workload", bench_workload, "Workload family")
        ->check(CLI::IsMember({"random", "skew_star", "sliding_window"}))
        ->capture_default_str();
    bench->add_option("--p-delete", bopts.workload.p_delete, "Deletion probability (random)")->capture_default_str();
    bench->add_option("--hub-fraction", bopts.workload.hub_fraction, "Hub fraction (skew_star)")
        ->capture_default_str();
    bench->add_option("--window", bopts.workload.window, "Edge lifetime (sliding_window)")->capture_default_str();
    bench->add_option("--mode", bench_mode, "Level mode")
        ->check(CLI::IsMember({"uncapped", "capped"}))
        ->capture_default_str();
    bench->add_flag("--no-naive", no_naive, "Skip the simple maintainer baseline");
    bench->add_option("--jobs", bopts.jobs, "Cells run in parallel")->capture_default_str();
    bench_report.attach(bench);

    // stats
    auto* stats = app.add_subcommand("stats", "Epoch statistics and duration uniformity");
    std::string stats_trace_path;
    EngineFlags stats_engine;
    ReportFlags stats_report;
    stats->add_option("--trace", stats_trace_path, "Trace file")->required();
    stats_engine.attach(stats, true);
    stats_report.attach(stats);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            harness::WorkloadParams w;
            w.kind = harness::parse_workload(gen_kind);
            w.p_delete = gen_p;
            w.hub_fraction = gen_hub;
            w.window = gen_window;
            Trace tr = harness::generate(w, gen_n, gen_t, gen_seed);
            if (gen_teardown) tr = append_teardown(tr);
            if (gen_out == "-") {
                out << encode(tr);
            } else {
                write_trace_file(gen_out, tr);
            }
            return kExitOk;
        }
        if (run->parsed()) {
            double load_seconds = 0;
            const Trace tr = load(run_trace_path, &load_seconds);
            if (run_engine.deep_tracking && tr.n > 10000) throw UsageError("--deep-tracking needs n <= 10000");
            harness::RunReport r = harness::run_trace(tr, run_engine.config(tr.events.size()));
            r.load_seconds = load_seconds;
            run_report.emit(harness::to_text(r), harness::to_json(r), out);
            return kExitOk;
        }
        if (verify->parsed()) {
            const Trace tr = load(verify_trace_path, nullptr);
            harness::VerifyOptions vo;
            vo.check_every = check_every;
            vo.inject_fault_after = inject_fault;
            if (approx) {
                if (tr.n > oracle::kMaxExactVertices) {
                    throw UsageError("--approx needs n <= " + std::to_string(oracle::kMaxExactVertices));
                }
                vo.approx_every = check_every;
            }
            const harness::VerifyResult r = harness::verify_trace(tr, verify_engine.config(tr.events.size()), vo);
            verify_report.emit(harness::to_text(r), harness::to_json(r), out);
            if (!r.passed) {
                err << "verification failed at step " << r.failed_step << ": " << r.invariant << " (" << r.detail
                    << ")\n";
                return kExitFailure;
            }
            return kExitOk;
        }
        if (bench->parsed()) {
            bopts.workload.kind = harness::parse_workload(bench_workload);
            bopts.mode = bench_mode == "capped" ? LevelMode::kCapped : LevelMode::kUncapped;
            bopts.run_naive = !no_naive;
            const auto rows = harness::bench(bopts);
            bench_report.emit(harness::to_text(rows), harness::to_json(rows), out);
            return kExitOk;
        }
        if (stats->parsed()) {
            const Trace tr = load(stats_trace_path, nullptr);
            if (stats_engine.deep_tracking && tr.n > 10000) throw UsageError("--deep-tracking needs n <= 10000");
            // Capped parameters account for the teardown the stats run appends.
            const std::uint64_t t = stats_engine.deep_tracking ? append_teardown(tr).events.size() : tr.events.size();
            const harness::EpochStats s = harness::epoch_stats(tr, stats_engine.config(t));
            stats_report.emit(harness::to_text(s), harness::to_json(s), out);
            return kExitOk;
        }
    } catch (const InvariantViolation& e) {
        err << "internal assertion failed: " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace dynmatch::cli
