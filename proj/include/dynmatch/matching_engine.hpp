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

#ifndef DYNMATCH_MATCHING_ENGINE_HPP_
#define DYNMATCH_MATCHING_ENGINE_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dynmatch/dyn_graph.hpp"
#include "dynmatch/metrics.hpp"
#include "dynmatch/types.hpp"
#include "dynmatch/work_ledger.hpp"

namespace dynmatch {

enum class LevelMode : std::uint8_t { kUncapped, kCapped };

struct EngineConfig {
    LevelMode mode = LevelMode::kUncapped;
    /// Highest level a vertex may reach in capped mode.
    Level level_cap = 0;
    /// Number of leading outgoing positions examined when drawing a mate at
    /// the cap.
    std::uint64_t cap_sample_width = 1;
    std::uint64_t rng_seed = 0;
    /// Also keep candidate snapshots and the deletion log.
    bool deep_tracking = false;

    /// Capped-mode parameters for a trace of length t: the largest cap with
    /// 3^cap <= 2 sqrt(t), and ceil(3 sqrt(t)) sampled positions.
    static EngineConfig capped_for_trace_length(std::uint64_t t, std::uint64_t seed);
    void validate() const;
};

/// Tallies of the settling procedures and of the runtime checks they make.
struct EngineStats {
    std::uint64_t updates = 0;
    std::uint64_t inserts = 0;
    std::uint64_t deletes = 0;
    std::uint64_t matched_deletes = 0;
    std::uint64_t deterministic_settles = 0;
    std::uint64_t random_settles = 0;
    std::uint64_t cap_samples = 0;
    std::uint64_t rise_checks = 0;
    std::uint64_t max_recursion_depth = 0;
    Level max_level_seen = kFreeLevel;
};

/// Fully dynamic maximal matching with constant amortized update time.
///
/// Vertices carry levels; each edge is oriented toward its lower endpoint.
/// A vertex freed by a deletion either scans its (short) outgoing list for a
/// free neighbor, or, when that list is long, rises to the lowest level at
/// which it has few enough lower-level neighbors and takes a uniformly random
/// one of them as its mate, possibly stealing it from a previous partner.
class MatchingEngine {
public:
    MatchingEngine(VertexId n, EngineConfig config);
    /// Adopts a prepared state (used to construct specific scenarios).
    MatchingEngine(DynGraph graph, EngineConfig config);

    MatchingEngine(const MatchingEngine&) = delete;
    MatchingEngine& operator=(const MatchingEngine&) = delete;
    MatchingEngine(MatchingEngine&&) = default;
    MatchingEngine& operator=(MatchingEngine&&) = default;

    void insert_edge(VertexId u, VertexId v);
    void delete_edge(VertexId u, VertexId v);
    void apply(const UpdateEvent& event);

    std::optional<VertexId> mate(VertexId v) const { return graph_.mate(v); }
    std::vector<Edge> matched_edges() const;
    std::vector<VertexId> vertex_cover() const;
    std::size_t matching_size() const { return graph_.matched_edge_count(); }

    // Settling procedures. They are public so scenarios can be driven one
    // step at a time; each checks its own precondition.

    /// Settles a temporarily free vertex by the scan or the rising path.
    void handle_free(VertexId v);
    /// Matches v with a free outgoing neighbor if one exists, else frees v.
    void deterministic_settle(VertexId v);
    /// Lowest level above level(v) at which v has fewer than 3^(l+1)
    /// neighbors below l+1; clamped to the cap in capped mode.
    Level compute_rising_level(VertexId v);
    /// Raises v and matches it with a random lower-level outgoing neighbor.
    void random_settle(VertexId v);

    const DynGraph& graph() const { return graph_; }
    const WorkLedger& ledger() const { return ledger_; }
    const EngineStats& stats() const { return stats_; }
    const EngineConfig& config() const { return config_; }
    MetricsReport metrics() const;

    /// Test hook: silently drops the matched edge at v without resettling,
    /// producing an invalid state for negative tests of the checkers.
    void corrupt_drop_match_for_testing(VertexId v);

private:
    class ChargeScope;

    struct SettleFrame {
        std::uint64_t debt = 0;
        std::int64_t parent_epoch = kNoEpoch;
        std::uint64_t depth = 0;
    };

    bool capped() const { return config_.mode == LevelMode::kCapped; }
    Level top_level() const { return graph_.level_limit(); }
    void random_settle(VertexId v, SettleFrame frame);
    VertexId pick_mate(VertexId v, Level target, std::vector<std::uint64_t>* snapshot);
    void begin_update();
    void end_update();
    void require(bool condition, const char* what) const;
    void check_budget();

    EngineConfig config_;
    DynGraph graph_;
    WorkLedger ledger_;
    std::mt19937_64 rng_;
    std::vector<std::uint64_t> pow3_;  // 3^0 .. 3^(level_limit + 1)
    EngineStats stats_;
    std::uint64_t step_ = 0;
    std::uint64_t settle_calls_this_update_ = 0;
    std::uint64_t settle_budget_ = 0;
};

}  // namespace dynmatch

#endif  // DYNMATCH_MATCHING_ENGINE_HPP_
