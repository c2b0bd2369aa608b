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

#ifndef DYNMATCH_HARNESS_HPP_
#define DYNMATCH_HARNESS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynmatch/matching_engine.hpp"
#include "dynmatch/metrics.hpp"
#include "dynmatch/work_ledger.hpp"
#include "dynmatch/workload.hpp"

// Drivers behind the command-line tool: replay, verification against the
// oracles, scaling benchmarks and epoch statistics.
namespace dynmatch::harness {

/// Engine configuration for a trace of `t` updates. In capped mode a missing
/// cap or width is derived from t.
EngineConfig make_config(LevelMode mode, std::uint64_t seed, std::uint64_t t, std::optional<Level> cap = {},
                         std::optional<std::uint64_t> width = {}, bool deep_tracking = false);

nlohmann::json config_json(const EngineConfig& cfg);

struct VerifyOptions {
    /// Full invariant and oracle check cadence, in steps. The last step is
    /// always checked.
    std::uint64_t check_every = 1;
    /// Exact 2-approximation check cadence; 0 disables it.
    std::uint64_t approx_every = 0;
    /// Also replay the simple maintainer and check its matching.
    bool differential = true;
    /// Test hook: silently break the matching right after this step.
    std::optional<std::uint64_t> inject_fault_after;
    /// Called after every applied step.
    std::function<void(std::uint64_t step, const MatchingEngine&)> on_step;
};

struct VerifyResult {
    bool passed = true;
    std::uint64_t steps = 0;
    std::uint64_t checks = 0;
    std::uint64_t approx_checks = 0;
    /// max over approximation checks of opt / |M| (0 when |M| = 0 = opt).
    double worst_ratio = 0.0;
    std::uint64_t failed_step = 0;
    std::string invariant;
    std::string detail;
    bool assertion = false;  // failure came from an engine runtime assertion
    MetricsReport metrics;
};

VerifyResult verify_trace(const Trace& trace, const EngineConfig& cfg, const VerifyOptions& opts);
nlohmann::json to_json(const VerifyResult& r);
std::string to_text(const VerifyResult& r);

struct RunReport {
    nlohmann::json config;
    std::uint64_t n = 0;
    std::uint64_t t = 0;
    MetricsReport metrics;
    std::uint64_t matching_size = 0;
    std::uint64_t cover_size = 0;
    double load_seconds = 0.0;
    double apply_seconds = 0.0;
};

RunReport run_trace(const Trace& trace, const EngineConfig& cfg);
/// Wall-clock values live under "timing" (JSON) or `timing.` keys (text).
nlohmann::json to_json(const RunReport& r);
std::string to_text(const RunReport& r);

enum class WorkloadKind { kRandom, kSkewStar, kSlidingWindow };
std::string to_string(WorkloadKind k);
WorkloadKind parse_workload(const std::string& s);

struct WorkloadParams {
    WorkloadKind kind = WorkloadKind::kRandom;
    double p_delete = 0.3;
    double hub_fraction = 0.0;
    std::int64_t window = 64;
};

Trace generate(const WorkloadParams& w, VertexId n, std::int64_t t, std::uint64_t seed);

struct BenchRow {
    std::string workload;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t updates = 0;
    double engine_work_per_update = 0.0;
    double engine_scans_per_update = 0.0;
    double engine_flips_per_update = 0.0;
    double naive_work_per_update = 0.0;
    double naive_scans_per_update = 0.0;
    double max_charged_ratio = 0.0;
    double max_rollup_ratio = 0.0;
    Level max_level = kFreeLevel;
    std::uint64_t epochs = 0;
    double engine_ns_per_update = 0.0;
    double naive_ns_per_update = 0.0;
};

struct BenchOptions {
    std::vector<VertexId> sizes;
    std::uint64_t t_multiplier = 20;
    std::uint64_t seeds = 5;
    std::uint64_t engine_seed = 1;
    std::uint64_t workload_seed = 1;
    WorkloadParams workload;
    LevelMode mode = LevelMode::kUncapped;
    bool run_naive = true;
    unsigned jobs = 1;
};

/// One cell: a workload trace of t_multiplier * n updates plus teardown,
/// replayed by the engine and by the simple maintainer.
BenchRow bench_cell(const BenchOptions& opts, VertexId n, std::uint64_t seed_index);
/// All (size, seed) cells in size-major order.
std::vector<BenchRow> bench(const BenchOptions& opts);

struct BenchSummaryRow {
    std::uint64_t n = 0;
    double engine_work_per_update = 0.0;
    double naive_work_per_update = 0.0;
    double max_rollup_ratio = 0.0;
    double max_charged_ratio = 0.0;
};
std::vector<BenchSummaryRow> summarize(const std::vector<BenchRow>& rows);
nlohmann::json to_json(const std::vector<BenchRow>& rows);
std::string to_text(const std::vector<BenchRow>& rows);

struct LevelDistribution {
    Level level = 0;
    std::uint64_t created = 0;
    std::uint64_t natural = 0;
    std::uint64_t induced = 0;
    /// charged_work / 3^level over terminated epochs.
    double mean_ratio = 0.0;
    double p50_ratio = 0.0;
    double p90_ratio = 0.0;
    double max_ratio = 0.0;
    double max_rollup_ratio = 0.0;
};

struct EpochStats {
    MetricsReport metrics;
    std::uint64_t teardown_events = 0;
    std::vector<LevelDistribution> levels;
    bool durations_available = false;
    /// Natural level >= 1 epochs.
    UniformityTest natural;
    /// Every level >= 1 epoch with a snapshot, however it ended.
    UniformityTest all_random;
};

/// Replays the trace (plus teardown when deep tracking and edges remain).
EpochStats epoch_stats(const Trace& trace, const EngineConfig& cfg);
nlohmann::json to_json(const EpochStats& s);
std::string to_text(const EpochStats& s);

}  // namespace dynmatch::harness

#endif  // DYNMATCH_HARNESS_HPP_
