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

#include "dynmatch/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "dynmatch/oracle.hpp"

namespace dynmatch::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string mode_name(LevelMode m) { return m == LevelMode::kCapped ? "capped" : "uncapped"; }

oracle::PairList as_pairs(const std::vector<Edge>& edges) {
    oracle::PairList out;
    out.reserve(edges.size());
    for (const Edge& e : edges) out.emplace_back(e.u, e.v);
    return out;
}

void apply_plain(oracle::PlainGraph& g, const UpdateEvent& e) {
    if (e.op == UpdateOp::kInsert) {
        g.add_edge(e.u, e.v);
    } else {
        g.remove_edge(e.u, e.v);
    }
}

}  // namespace

EngineConfig make_config(LevelMode mode, std::uint64_t seed, std::uint64_t t, std::optional<Level> cap,
                         std::optional<std::uint64_t> width, bool deep_tracking) {
    EngineConfig cfg;
    if (mode == LevelMode::kCapped) {
        cfg = EngineConfig::capped_for_trace_length(t, seed);
        if (cap) cfg.level_cap = *cap;
        if (width) cfg.cap_sample_width = *width;
    }
    cfg.rng_seed = seed;
    cfg.deep_tracking = deep_tracking;
    cfg.validate();
    return cfg;
}

nlohmann::json config_json(const EngineConfig& cfg) {
    nlohmann::json j = {{"mode", mode_name(cfg.mode)}, {"seed", cfg.rng_seed}, {"deep_tracking", cfg.deep_tracking}};
    if (cfg.mode == LevelMode::kCapped) {
        j["level_cap"] = cfg.level_cap;
        j["cap_sample_width"] = cfg.cap_sample_width;
    }
    return j;
}

VerifyResult verify_trace(const Trace& trace, const EngineConfig& cfg, const VerifyOptions& opts) {
    if (opts.check_every == 0) throw std::invalid_argument("check_every must be at least 1");
    if (opts.approx_every > 0 && trace.n > oracle::kMaxExactVertices) {
        throw std::invalid_argument("approximation checks need n <= " + std::to_string(oracle::kMaxExactVertices));
    }
    validate(trace);
    VerifyResult r;
    MatchingEngine engine(trace.n, cfg);
    oracle::PlainGraph plain(trace.n);
    std::optional<oracle::NaiveMaintainer> naive;
    if (opts.differential) naive.emplace(trace.n);
    bool fault_pending = opts.inject_fault_after.has_value();

    auto fail = [&r](std::uint64_t step, std::string invariant, std::string detail) {
        r.passed = false;
        r.failed_step = step;
        r.invariant = std::move(invariant);
        r.detail = std::move(detail);
    };

    const std::uint64_t t = trace.events.size();
    for (std::uint64_t step = 1; step <= t; ++step) {
        const UpdateEvent& e = trace.events[step - 1];
        try {
            engine.apply(e);
        } catch (const InvariantViolation& ex) {
            r.assertion = true;
            fail(step, "runtime-assertion", ex.what());
            break;
        }
        apply_plain(plain, e);
        if (naive) naive->apply(e);
        r.steps = step;
        if (fault_pending && step >= *opts.inject_fault_after) {
            const auto cover = engine.vertex_cover();
            if (!cover.empty()) {
                engine.corrupt_drop_match_for_testing(cover.front());
                fault_pending = false;
            }
        }
        if (opts.on_step) opts.on_step(step, engine);

        if (step % opts.check_every == 0 || step == t) {
            ++r.checks;
            const auto violations = engine.graph().consistency_check();
            if (!violations.empty()) {
                fail(step, to_string(violations.front().kind), violations.front().detail);
                break;
            }
            const auto matching = as_pairs(engine.matched_edges());
            if (!oracle::check_maximal(plain, matching)) {
                fail(step, "maximality", "oracle rejects the engine matching");
                break;
            }
            if (naive && !oracle::check_maximal(plain, naive->matching())) {
                fail(step, "naive-maximality", "oracle rejects the simple maintainer's matching");
                break;
            }
        }
        if (opts.approx_every > 0 && step % opts.approx_every == 0) {
            ++r.approx_checks;
            const std::size_t opt = oracle::max_matching_size(plain);
            const std::size_t m = engine.matching_size();
            if (opt > 2 * m) {
                fail(step, "2-approximation",
                     "maximum matching " + std::to_string(opt) + " exceeds twice " + std::to_string(m));
                break;
            }
            if (m > 0) r.worst_ratio = std::max(r.worst_ratio, static_cast<double>(opt) / static_cast<double>(m));
        }
    }
    if (!r.assertion) r.metrics = engine.metrics();
    return r;
}

nlohmann::json to_json(const VerifyResult& r) {
    nlohmann::json j = {{"passed", r.passed},
                        {"steps", r.steps},
                        {"checks", r.checks},
                        {"approx_checks", r.approx_checks},
                        {"worst_ratio", r.worst_ratio},
                        {"metrics", to_json(r.metrics)}};
    if (!r.passed) {
        j["failed_step"] = r.failed_step;
        j["invariant"] = r.invariant;
        j["detail"] = r.detail;
    }
    return j;
}

std::string to_text(const VerifyResult& r) {
    std::ostringstream os;
    os << "result=" << (r.passed ? "pass" : "fail") << '\n';
    if (!r.passed) {
        os << "failed_step=" << r.failed_step << '\n';
        os << "invariant=" << r.invariant << '\n';
        os << "detail=" << r.detail << '\n';
    }
    os << "steps=" << r.steps << '\n';
    os << "checks=" << r.checks << '\n';
    os << "approx_checks=" << r.approx_checks << '\n';
    os << "worst_ratio=" << format_ratio(r.worst_ratio) << '\n';
    return os.str();
}

RunReport run_trace(const Trace& trace, const EngineConfig& cfg) {
    RunReport r;
    r.config = config_json(cfg);
    r.n = static_cast<std::uint64_t>(trace.n);
    r.t = trace.events.size();
    MatchingEngine engine(trace.n, cfg);
    const auto start = Clock::now();
    for (const UpdateEvent& e : trace.events) engine.apply(e);
    r.apply_seconds = seconds_since(start);
    r.metrics = engine.metrics();
    r.matching_size = engine.matching_size();
    r.cover_size = engine.vertex_cover().size();
    return r;
}

nlohmann::json to_json(const RunReport& r) {
    nlohmann::json j = {{"config", r.config},
                        {"n", r.n},
                        {"t", r.t},
                        {"metrics", to_json(r.metrics)},
                        {"matching_size", r.matching_size},
                        {"cover_size", r.cover_size}};
    j["timing"] = {{"load_seconds", r.load_seconds},
                   {"apply_seconds", r.apply_seconds},
                   {"ns_per_update", r.t == 0 ? 0.0 : r.apply_seconds * 1e9 / static_cast<double>(r.t)}};
    return j;
}

std::string to_text(const RunReport& r) {
    std::ostringstream os;
    for (const auto& [k, v] : r.config.items()) {
        os << "config." << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
    os << "n=" << r.n << '\n' << "t=" << r.t << '\n';
    os << to_text(r.metrics);
    os << "final.matching_size=" << r.matching_size << '\n';
    os << "final.cover_size=" << r.cover_size << '\n';
    os << "timing.load_seconds=" << format_ratio(r.load_seconds) << '\n';
    os << "timing.apply_seconds=" << format_ratio(r.apply_seconds) << '\n';
    return os.str();
}

std::string to_string(WorkloadKind k) {
    switch (k) {
        case WorkloadKind::kRandom: return "random";
        case WorkloadKind::kSkewStar: return "skew_star";
        case WorkloadKind::kSlidingWindow: return "sliding_window";
    }
    return "unknown";
}

WorkloadKind parse_workload(const std::string& s) {
    if (s == "random") return WorkloadKind::kRandom;
    if (s == "skew_star") return WorkloadKind::kSkewStar;
    if (s == "sliding_window") return WorkloadKind::kSlidingWindow;
    throw std::invalid_argument("unknown workload '" + s + "'");
}

Trace generate(const WorkloadParams& w, VertexId n, std::int64_t t, std::uint64_t seed) {
    switch (w.kind) {
        case WorkloadKind::kRandom: return gen_random(n, t, w.p_delete, seed);
        case WorkloadKind::kSkewStar: return gen_skew_star(n, t, w.hub_fraction, seed);
        case WorkloadKind::kSlidingWindow: return gen_sliding_window(n, t, w.window, seed);
    }
    throw std::invalid_argument("unknown workload");
}

BenchRow bench_cell(const BenchOptions& opts, VertexId n, std::uint64_t seed_index) {
    const auto t = static_cast<std::int64_t>(opts.t_multiplier * static_cast<std::uint64_t>(n));
    const Trace trace = append_teardown(generate(opts.workload, n, t, opts.workload_seed + seed_index));
    BenchRow row;
    row.workload = to_string(opts.workload.kind);
    row.n = static_cast<std::uint64_t>(n);
    row.seed = seed_index;
    row.updates = trace.events.size();
    const auto updates = static_cast<double>(std::max<std::uint64_t>(row.updates, 1));

    {
        MatchingEngine engine(n, make_config(opts.mode, opts.engine_seed + seed_index, row.updates));
        const auto start = Clock::now();
        for (const UpdateEvent& e : trace.events) engine.apply(e);
        row.engine_ns_per_update = seconds_since(start) * 1e9 / updates;
        const MetricsReport m = engine.metrics();
        row.engine_work_per_update = static_cast<double>(m.work) / updates;
        row.engine_scans_per_update = static_cast<double>(m.scans) / updates;
        row.engine_flips_per_update = static_cast<double>(m.flips) / updates;
        row.max_charged_ratio = m.max_charged_ratio;
        row.max_rollup_ratio = m.max_rollup_ratio;
        row.max_level = m.max_level;
        row.epochs = m.epochs_created;
    }
    if (opts.run_naive) {
        oracle::NaiveMaintainer naive(n);
        const auto start = Clock::now();
        for (const UpdateEvent& e : trace.events) naive.apply(e);
        row.naive_ns_per_update = seconds_since(start) * 1e9 / updates;
        row.naive_work_per_update = static_cast<double>(naive.work()) / updates;
        row.naive_scans_per_update = static_cast<double>(naive.scans()) / updates;
    }
    return row;
}

std::vector<BenchRow> bench(const BenchOptions& opts) {
    if (!std::is_sorted(opts.sizes.begin(), opts.sizes.end())) {
        throw std::invalid_argument("bench sizes must be ascending");
    }
    std::vector<std::pair<VertexId, std::uint64_t>> cells;
    for (VertexId n : opts.sizes) {
        for (std::uint64_t s = 0; s < opts.seeds; ++s) cells.emplace_back(n, s);
    }
    std::vector<BenchRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                rows[i] = bench_cell(opts, cells[i].first, cells[i].second);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        }
    };
    const unsigned jobs = std::max(1u, opts.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    return rows;
}

std::vector<BenchSummaryRow> summarize(const std::vector<BenchRow>& rows) {
    std::map<std::uint64_t, std::pair<BenchSummaryRow, std::uint64_t>> acc;
    for (const BenchRow& r : rows) {
        auto& [s, count] = acc[r.n];
        s.n = r.n;
        s.engine_work_per_update += r.engine_work_per_update;
        s.naive_work_per_update += r.naive_work_per_update;
        s.max_rollup_ratio = std::max(s.max_rollup_ratio, r.max_rollup_ratio);
        s.max_charged_ratio = std::max(s.max_charged_ratio, r.max_charged_ratio);
        ++count;
    }
    std::vector<BenchSummaryRow> out;
    for (auto& [n, entry] : acc) {
        auto& [s, count] = entry;
        s.engine_work_per_update /= static_cast<double>(count);
        s.naive_work_per_update /= static_cast<double>(count);
        out.push_back(s);
    }
    return out;
}

nlohmann::json to_json(const std::vector<BenchRow>& rows) {
    nlohmann::json cells = nlohmann::json::array();
    nlohmann::json timing = nlohmann::json::array();
    for (const BenchRow& r : rows) {
        cells.push_back({{"workload", r.workload},
                         {"n", r.n},
                         {"seed", r.seed},
                         {"updates", r.updates},
                         {"engine_work_per_update", r.engine_work_per_update},
                         {"engine_scans_per_update", r.engine_scans_per_update},
                         {"engine_flips_per_update", r.engine_flips_per_update},
                         {"naive_work_per_update", r.naive_work_per_update},
                         {"naive_scans_per_update", r.naive_scans_per_update},
                         {"max_charged_ratio", r.max_charged_ratio},
                         {"max_rollup_ratio", r.max_rollup_ratio},
                         {"max_level", r.max_level},
                         {"epochs", r.epochs}});
        timing.push_back({{"n", r.n},
                          {"seed", r.seed},
                          {"engine_ns_per_update", r.engine_ns_per_update},
                          {"naive_ns_per_update", r.naive_ns_per_update}});
    }
    nlohmann::json summary = nlohmann::json::array();
    for (const BenchSummaryRow& s : summarize(rows)) {
        summary.push_back({{"n", s.n},
                           {"engine_work_per_update", s.engine_work_per_update},
                           {"naive_work_per_update", s.naive_work_per_update},
                           {"max_charged_ratio", s.max_charged_ratio},
                           {"max_rollup_ratio", s.max_rollup_ratio}});
    }
    return {{"rows", cells}, {"summary", summary}, {"timing", timing}};
}

std::string to_text(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "workload n seed updates engine_work/t engine_scans/t naive_work/t naive_scans/t "
          "max_charged/3^l max_rollup/3^l max_level engine_ns/t naive_ns/t\n";
    for (const BenchRow& r : rows) {
        os << r.workload << ' ' << r.n << ' ' << r.seed << ' ' << r.updates << ' '
           << format_ratio(r.engine_work_per_update) << ' ' << format_ratio(r.engine_scans_per_update) << ' '
           << format_ratio(r.naive_work_per_update) << ' ' << format_ratio(r.naive_scans_per_update) << ' '
           << format_ratio(r.max_charged_ratio) << ' ' << format_ratio(r.max_rollup_ratio) << ' ' << r.max_level
           << ' ' << format_ratio(r.engine_ns_per_update) << ' ' << format_ratio(r.naive_ns_per_update) << '\n';
    }
    const auto summary = summarize(rows);
    os << "# mean per size: n engine_work/t naive_work/t max_rollup/3^l\n";
    for (const BenchSummaryRow& s : summary) {
        os << "# " << s.n << ' ' << format_ratio(s.engine_work_per_update) << ' '
           << format_ratio(s.naive_work_per_update) << ' ' << format_ratio(s.max_rollup_ratio) << '\n';
    }
    if (summary.size() >= 2 && summary.front().engine_work_per_update > 0) {
        os << "# engine growth (largest/smallest n)="
           << format_ratio(summary.back().engine_work_per_update / summary.front().engine_work_per_update) << '\n';
        if (summary.front().naive_work_per_update > 0) {
            os << "# naive growth (largest/smallest n)="
               << format_ratio(summary.back().naive_work_per_update / summary.front().naive_work_per_update) << '\n';
        }
    }
    return os.str();
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    return sorted[static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1))];
}

}  // namespace

EpochStats epoch_stats(const Trace& trace, const EngineConfig& cfg) {
    EpochStats s;
    Trace full = trace;
    if (cfg.deep_tracking) {
        full = append_teardown(trace);
        s.teardown_events = full.events.size() - trace.events.size();
    }
    MatchingEngine engine(full.n, cfg);
    for (const UpdateEvent& e : full.events) engine.apply(e);
    s.metrics = engine.metrics();

    const WorkLedger& ledger = engine.ledger();
    const std::vector<std::uint64_t> rollup = ledger.recursive_costs();
    std::vector<std::vector<double>> ratios(static_cast<std::size_t>(engine.graph().level_limit()) + 1);
    s.levels.resize(ratios.size());
    for (std::size_t l = 0; l < s.levels.size(); ++l) s.levels[l].level = static_cast<Level>(l);
    for (std::size_t i = 0; i < ledger.epochs().size(); ++i) {
        const EpochRecord& e = ledger.epochs()[i];
        LevelDistribution& d = s.levels[static_cast<std::size_t>(e.level)];
        ++d.created;
        if (e.cause == EpochEnd::kAlive) continue;
        (e.cause == EpochEnd::kNatural ? d.natural : d.induced) += 1;
        const auto scale = static_cast<double>(pow3(e.level));
        ratios[static_cast<std::size_t>(e.level)].push_back(static_cast<double>(e.charged_work) / scale);
        d.max_rollup_ratio = std::max(d.max_rollup_ratio, static_cast<double>(rollup[i]) / scale);
    }
    for (std::size_t l = 0; l < ratios.size(); ++l) {
        auto& v = ratios[l];
        if (v.empty()) continue;
        std::sort(v.begin(), v.end());
        double sum = 0;
        for (double x : v) sum += x;
        s.levels[l].mean_ratio = sum / static_cast<double>(v.size());
        s.levels[l].p50_ratio = quantile(v, 0.5);
        s.levels[l].p90_ratio = quantile(v, 0.9);
        s.levels[l].max_ratio = v.back();
    }
    if (cfg.deep_tracking) {
        s.durations_available = true;
        const auto natural = duration_samples(ledger, true);
        const auto all = duration_samples(ledger, false);
        s.natural = duration_uniformity(natural);
        s.all_random = duration_uniformity(all);
    }
    return s;
}

namespace {

nlohmann::json uniformity_json(const UniformityTest& u) {
    return {{"samples", u.samples},
            {"observed", u.observed},
            {"expected", u.expected},
            {"chi_square", u.chi_square},
            {"degrees_of_freedom", u.degrees_of_freedom},
            {"p_value", u.p_value}};
}

void uniformity_text(std::ostream& os, const std::string& prefix, const UniformityTest& u) {
    os << prefix << "samples=" << u.samples << '\n';
    for (std::size_t i = 0; i < u.observed.size(); ++i) {
        os << prefix << "bin." << i + 1 << '=' << u.observed[i] << ' ' << format_ratio(u.expected[i]) << '\n';
    }
    os << prefix << "chi_square=" << format_ratio(u.chi_square) << '\n';
    os << prefix << "degrees_of_freedom=" << u.degrees_of_freedom << '\n';
    os << prefix << "p_value=" << format_ratio(u.p_value) << '\n';
}

}  // namespace

nlohmann::json to_json(const EpochStats& s) {
    nlohmann::json levels = nlohmann::json::array();
    for (const LevelDistribution& d : s.levels) {
        levels.push_back({{"level", d.level},
                          {"created", d.created},
                          {"natural", d.natural},
                          {"induced", d.induced},
                          {"mean_ratio", d.mean_ratio},
                          {"p50_ratio", d.p50_ratio},
                          {"p90_ratio", d.p90_ratio},
                          {"max_ratio", d.max_ratio},
                          {"max_rollup_ratio", d.max_rollup_ratio}});
    }
    nlohmann::json j = {{"metrics", to_json(s.metrics)}, {"teardown_events", s.teardown_events}, {"levels", levels}};
    if (s.durations_available) {
        j["durations"] = {{"natural", uniformity_json(s.natural)}, {"all_random", uniformity_json(s.all_random)}};
    }
    return j;
}

std::string to_text(const EpochStats& s) {
    std::ostringstream os;
    os << to_text(s.metrics);
    os << "teardown_events=" << s.teardown_events << '\n';
    for (const LevelDistribution& d : s.levels) {
        const std::string p = "dist." + std::to_string(d.level) + ".";
        os << p << "created=" << d.created << '\n';
        os << p << "natural=" << d.natural << '\n';
        os << p << "induced=" << d.induced << '\n';
        os << p << "mean_ratio=" << format_ratio(d.mean_ratio) << '\n';
        os << p << "p50_ratio=" << format_ratio(d.p50_ratio) << '\n';
        os << p << "p90_ratio=" << format_ratio(d.p90_ratio) << '\n';
        os << p << "max_ratio=" << format_ratio(d.max_ratio) << '\n';
        os << p << "max_rollup_ratio=" << format_ratio(d.max_rollup_ratio) << '\n';
    }
    if (s.durations_available) {
        uniformity_text(os, "durations.natural.", s.natural);
        uniformity_text(os, "durations.all_random.", s.all_random);
    }
    return os.str();
}

}  // namespace dynmatch::harness
