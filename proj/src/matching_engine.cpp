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

#include "dynmatch/matching_engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace dynmatch {

EngineConfig EngineConfig::capped_for_trace_length(std::uint64_t t, std::uint64_t seed) {
    EngineConfig cfg;
    cfg.mode = LevelMode::kCapped;
    cfg.rng_seed = seed;
    // 3^l <= 2 sqrt(t)  <=>  9^l <= 4t
    Level cap = 0;
    for (unsigned __int128 p = 9; p <= static_cast<unsigned __int128>(t) * 4; p *= 9) ++cap;
    cfg.level_cap = cap;
    // smallest w with w^2 >= 9t
    std::uint64_t w = 0;
    while (static_cast<unsigned __int128>(w) * w < static_cast<unsigned __int128>(t) * 9) ++w;
    cfg.cap_sample_width = std::max<std::uint64_t>(w, 1);
    return cfg;
}

void EngineConfig::validate() const {
    if (mode == LevelMode::kCapped) {
        if (level_cap < 0) throw std::invalid_argument("capped mode needs level_cap >= 0");
        if (cap_sample_width < 1) throw std::invalid_argument("capped mode needs cap_sample_width >= 1");
    }
}

// Routes elementary work to `target` for the lifetime of the scope.
class MatchingEngine::ChargeScope {
public:
    ChargeScope(MatchingEngine& e, ChargeTarget target) : e_(e) {
        prev_ = e_.ledger_.switch_to(target, e_.graph_.counters().work);
    }
    ~ChargeScope() { e_.ledger_.switch_to(prev_, e_.graph_.counters().work); }
    ChargeScope(const ChargeScope&) = delete;
    ChargeScope& operator=(const ChargeScope&) = delete;

    void retarget(ChargeTarget target) { e_.ledger_.switch_to(target, e_.graph_.counters().work); }

private:
    MatchingEngine& e_;
    ChargeTarget prev_;
};

namespace {

Level graph_limit(VertexId n, const EngineConfig& cfg) {
    cfg.validate();
    return cfg.mode == LevelMode::kCapped ? cfg.level_cap : max_level_for(n);
}

}  // namespace

MatchingEngine::MatchingEngine(VertexId n, EngineConfig config)
    : MatchingEngine(DynGraph(n, graph_limit(n, config)), config) {}

MatchingEngine::MatchingEngine(DynGraph graph, EngineConfig config)
    : config_(config),
      graph_(std::move(graph)),
      ledger_(graph_.num_vertices(), config.deep_tracking),
      rng_(config.rng_seed) {
    config_.validate();
    if (capped() && graph_.level_limit() != config_.level_cap) {
        throw std::invalid_argument("adopted graph level limit differs from the configured cap");
    }
    for (Level l = 0; l <= graph_.level_limit() + 1; ++l) pow3_.push_back(pow3(l));
    ledger_.flush(graph_.counters().work);
    const auto n = static_cast<std::uint64_t>(graph_.num_vertices());
    settle_budget_ = std::max<std::uint64_t>(1u << 16, 64 * n * static_cast<std::uint64_t>(pow3_.size()));
}

void MatchingEngine::require(bool condition, const char* what) const {
    if (!condition) throw InvariantViolation(what);
}

void MatchingEngine::check_budget() {
    if (++settle_calls_this_update_ > settle_budget_) {
        throw InvariantViolation("settle-call budget exceeded within one update");
    }
}

void MatchingEngine::begin_update() {
    ++step_;
    ++stats_.updates;
    settle_calls_this_update_ = 0;
}

void MatchingEngine::end_update() {
    ledger_.flush(graph_.counters().work);
    require(ledger_.current().kind == ChargeTarget::Kind::kOverhead, "charge target leaked out of an update");
}

void MatchingEngine::insert_edge(VertexId u, VertexId v) {
    begin_update();
    ++stats_.inserts;
    const bool both_free = graph_.level(u) == kFreeLevel && graph_.level(v) == kFreeLevel &&
                           !graph_.is_matched(u) && !graph_.is_matched(v);
    if (graph_.level(u) >= graph_.level(v)) {
        graph_.add_arc(u, v, step_);
    } else {
        graph_.add_arc(v, u, step_);
    }
    if (both_free) {
        graph_.set_mates(u, v);
        const EpochId e = ledger_.on_epoch_created(u, v, 0, EpochOrigin::kInsert, step_, step_);
        ChargeScope scope(*this, ChargeTarget::epoch(e));
        graph_.set_level(u, 0);
        graph_.set_level(v, 0);
        stats_.max_level_seen = std::max(stats_.max_level_seen, Level{0});
    }
    end_update();
}

void MatchingEngine::delete_edge(VertexId u, VertexId v) {
    if (!graph_.has_edge(u, v)) {
        throw std::invalid_argument("delete_edge: edge {" + std::to_string(u) + "," + std::to_string(v) +
                                    "} is not present");
    }
    begin_update();
    ++stats_.deletes;
    const RemovedEdge removed = graph_.remove_edge(u, v);
    ledger_.on_edge_deleted(removed.tag, step_);
    if (removed.matched) {
        ++stats_.matched_deletes;
        const std::int64_t e = ledger_.active_epoch(u);
        require(e != kNoEpoch && e == ledger_.active_epoch(v), "matched edge without a live epoch");
        graph_.clear_mates(u, v);
        ledger_.on_epoch_terminated(static_cast<EpochId>(e), EpochEnd::kNatural, step_);
        graph_.set_temporarily_free(u, true);
        graph_.set_temporarily_free(v, true);
        ChargeScope scope(*this, ChargeTarget::epoch(static_cast<EpochId>(e)));
        handle_free(u);
        if (graph_.is_temporarily_free(v)) handle_free(v);
    }
    end_update();
}

void MatchingEngine::apply(const UpdateEvent& event) {
    if (event.op == UpdateOp::kInsert) {
        insert_edge(event.u, event.v);
    } else {
        delete_edge(event.u, event.v);
    }
}

std::vector<Edge> MatchingEngine::matched_edges() const {
    std::vector<Edge> out;
    for (VertexId v = 0; v < graph_.num_vertices(); ++v) {
        const auto m = graph_.mate(v);
        if (m && v < *m) out.emplace_back(v, *m);
    }
    return out;
}

std::vector<VertexId> MatchingEngine::vertex_cover() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < graph_.num_vertices(); ++v) {
        if (graph_.is_matched(v)) out.push_back(v);
    }
    return out;
}

void MatchingEngine::handle_free(VertexId v) {
    if (!graph_.is_temporarily_free(v) || graph_.is_matched(v)) {
        throw std::logic_error("handle_free: vertex " + std::to_string(v) + " is not temporarily free");
    }
    const Level l = graph_.level(v);
    require(l >= 0, "temporarily free vertex below level 0");
    if (graph_.out_degree(v) < pow3_[l + 1]) {
        deterministic_settle(v);
    } else {
        random_settle(v);
    }
}

void MatchingEngine::deterministic_settle(VertexId v) {
    if (!graph_.is_temporarily_free(v) || graph_.is_matched(v)) {
        throw std::logic_error("deterministic_settle: vertex " + std::to_string(v) +
                               " is not temporarily free");
    }
    const Level l = graph_.level(v);
    if (l < 0 || graph_.out_degree(v) >= pow3_[l + 1]) {
        throw std::logic_error("deterministic_settle: outgoing list too long for the scan path");
    }
    check_budget();
    ++stats_.deterministic_settles;
    VertexId found = kNoVertex;
    for (const Slot& s : graph_.out(v)) {
        graph_.counters().scan();
        if (graph_.level(s.other) == kFreeLevel) {
            found = s.other;
            break;
        }
    }
    graph_.set_temporarily_free(v, false);
    if (found == kNoVertex) {
        graph_.set_level(v, kFreeLevel);
        return;
    }
    graph_.set_mates(v, found);
    ledger_.on_epoch_created(v, found, 0, EpochOrigin::kDeterministic, step_, graph_.edge_tag(v, found));
    graph_.set_level(v, 0);
    graph_.set_level(found, 0);
    stats_.max_level_seen = std::max(stats_.max_level_seen, Level{0});
}

Level MatchingEngine::compute_rising_level(VertexId v) {
    const Level lv = graph_.level(v);
    if (lv < 0 || graph_.out_degree(v) < pow3_[lv + 1]) {
        throw std::logic_error("compute_rising_level: outgoing list too short to rise");
    }
    const Level top = top_level();
    if (capped() && lv >= top) return top;
    // phi(c + 1) = |out| + sizes of the incoming buckets at levels lv..c
    graph_.counters().read_bucket();
    std::uint64_t phi = graph_.out_degree(v) + graph_.incoming_size(v, lv);
    for (Level c = lv + 1; c <= top; ++c) {
        ++stats_.rise_checks;
        graph_.counters().read_bucket();
        phi += graph_.incoming_size(v, c);
        if (phi < pow3_[c + 1]) return c;
        if (capped() && c == top) return top;
    }
    throw InvariantViolation("no rising level exists below the level ceiling");
}

void MatchingEngine::random_settle(VertexId v) { random_settle(v, SettleFrame{}); }

VertexId MatchingEngine::pick_mate(VertexId v, Level target, std::vector<std::uint64_t>* snapshot) {
    const auto out = graph_.out(v);
    if (capped() && target == top_level()) {
        ++stats_.cap_samples;
        const std::size_t width = std::min<std::uint64_t>(config_.cap_sample_width, out.size());
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < width; ++i) {
            graph_.counters().scan();
            if (graph_.level(out[i].other) < target) candidates.push_back(i);
        }
        if (candidates.empty()) {
            throw InvariantViolation("no sub-cap candidate among the sampled outgoing neighbors");
        }
        if (snapshot != nullptr) {
            for (std::size_t i : candidates) snapshot->push_back(graph_.edge_tag(out[i]));
        }
        return out[candidates[DynGraph::uniform_index(rng_, candidates.size())]].other;
    }
    if (snapshot != nullptr) {
        for (const Slot& s : out) snapshot->push_back(graph_.edge_tag(s));
    }
    return graph_.random_out_neighbor(v, rng_);
}

void MatchingEngine::random_settle(VertexId v, SettleFrame frame) {
    if (!graph_.is_temporarily_free(v) || graph_.is_matched(v)) {
        throw std::logic_error("random_settle: vertex " + std::to_string(v) + " is not temporarily free");
    }
    const Level lv = graph_.level(v);
    if (lv < 0 || graph_.out_degree(v) < pow3_[lv + 1]) {
        throw std::logic_error("random_settle: outgoing list too short to rise");
    }
    check_budget();
    ++stats_.random_settles;
    require(frame.depth <= static_cast<std::uint64_t>(top_level()) + 1, "recursion deeper than the level range");
    stats_.max_recursion_depth = std::max(stats_.max_recursion_depth, frame.depth + 1);

    // Work done before the new epoch exists accumulates in pending slots.
    const std::uint32_t slot_a = ledger_.open_pending();
    ChargeScope scope(*this, ChargeTarget::pending(slot_a));

    const Level target = compute_rising_level(v);
    const bool at_cap = capped() && target == top_level();
    require(target > lv || (capped() && lv == top_level()), "rising level does not exceed the current level");
    graph_.set_level(v, target);
    const std::uint64_t dout = graph_.out_degree(v);
    require(dout >= pow3_[target], "post-rise out-degree below 3^level");
    require(at_cap || dout < pow3_[target + 1], "post-rise out-degree not below 3^(level+1)");
    stats_.max_level_seen = std::max(stats_.max_level_seen, target);

    std::vector<std::uint64_t> snapshot;
    const VertexId w = pick_mate(v, target, ledger_.deep_tracking() ? &snapshot : nullptr);
    require(graph_.level(w) < target, "random mate is not below the rising level");

    VertexId old_mate = kNoVertex;
    std::int64_t old_epoch = kNoEpoch;
    if (const auto m = graph_.mate(w)) {
        old_mate = *m;
        old_epoch = ledger_.active_epoch(w);
        require(old_epoch != kNoEpoch, "matched vertex without a live epoch");
        graph_.clear_mates(w, old_mate);
        ledger_.on_epoch_terminated(static_cast<EpochId>(old_epoch), EpochEnd::kInduced, step_);
        graph_.set_temporarily_free(old_mate, true);
    }

    const std::uint32_t slot_b = ledger_.open_pending();
    scope.retarget(ChargeTarget::pending(slot_b));
    graph_.set_level(w, target);

    graph_.set_temporarily_free(v, false);
    graph_.set_temporarily_free(w, false);
    graph_.set_mates(v, w);
    const EpochId epoch =
        ledger_.on_epoch_created(v, w, target, EpochOrigin::kRandom, step_, graph_.edge_tag(v, w));
    if (ledger_.deep_tracking()) ledger_.record_snapshot(epoch, std::move(snapshot));
    if (old_epoch != kNoEpoch) ledger_.set_terminator(static_cast<EpochId>(old_epoch), epoch);
    if (frame.parent_epoch != kNoEpoch) ledger_.set_terminator(static_cast<EpochId>(frame.parent_epoch), epoch);
    scope.retarget(ChargeTarget::epoch(epoch));
    const std::uint64_t debt_b = ledger_.close_pending(slot_b);
    ledger_.charge(epoch, ledger_.close_pending(slot_a) + frame.debt);

    if (!at_cap && graph_.out_degree(w) >= pow3_[target + 1]) {
        graph_.clear_mates(v, w);
        ledger_.on_epoch_terminated(epoch, EpochEnd::kInduced, step_);
        graph_.set_temporarily_free(v, true);
        graph_.set_temporarily_free(w, true);
        random_settle(w, SettleFrame{debt_b, epoch, frame.depth + 1});
        if (graph_.is_temporarily_free(v)) handle_free(v);
    } else {
        ledger_.charge(epoch, debt_b);
    }

    if (old_mate != kNoVertex && graph_.is_temporarily_free(old_mate)) {
        scope.retarget(ChargeTarget::epoch(static_cast<EpochId>(old_epoch)));
        handle_free(old_mate);
    }
}

MetricsReport MatchingEngine::metrics() const {
    MetricsReport m;
    m.updates = stats_.updates;
    m.inserts = stats_.inserts;
    m.deletes = stats_.deletes;
    m.matched_deletes = stats_.matched_deletes;
    const WorkCounters& c = graph_.counters();
    m.work = c.work;
    m.mutations = c.mutations;
    m.bucket_reads = c.bucket_reads;
    m.scans = c.scans;
    m.flips = c.flips;
    if (m.updates > 0) {
        const auto t = static_cast<double>(m.updates);
        m.work_per_update = static_cast<double>(m.work) / t;
        m.scans_per_update = static_cast<double>(m.scans) / t;
        m.flips_per_update = static_cast<double>(m.flips) / t;
    }
    m.overhead_work = ledger_.overhead_work();
    m.pending_work = ledger_.pending_balance();
    m.deterministic_settles = stats_.deterministic_settles;
    m.random_settles = stats_.random_settles;
    m.cap_samples = stats_.cap_samples;
    m.rise_checks = stats_.rise_checks;
    m.max_recursion_depth = stats_.max_recursion_depth;
    m.max_level = stats_.max_level_seen;
    m.level_limit = graph_.level_limit();
    m.matching_size = graph_.matched_edge_count();
    m.live_edges = graph_.num_edges();

    const auto& epochs = ledger_.epochs();
    const std::vector<std::uint64_t> rollup = ledger_.recursive_costs();
    m.levels.resize(static_cast<std::size_t>(graph_.level_limit()) + 1);
    for (std::size_t i = 0; i < m.levels.size(); ++i) m.levels[i].level = static_cast<Level>(i);
    for (std::size_t i = 0; i < epochs.size(); ++i) {
        const EpochRecord& e = epochs[i];
        LevelMetrics& lm = m.levels[static_cast<std::size_t>(e.level)];
        ++lm.created;
        lm.charged_work += e.charged_work;
        m.epoch_work += e.charged_work;
        if (e.cause == EpochEnd::kAlive) continue;
        ++lm.terminated;
        if (e.cause == EpochEnd::kNatural) {
            ++lm.natural;
        } else {
            ++lm.induced;
            if (e.level == graph_.level_limit()) ++m.induced_at_level_limit;
        }
        const auto scale = static_cast<double>(pow3_[e.level]);
        lm.max_charged_ratio = std::max(lm.max_charged_ratio, static_cast<double>(e.charged_work) / scale);
        lm.max_rollup_ratio = std::max(lm.max_rollup_ratio, static_cast<double>(rollup[i]) / scale);
    }
    for (const LevelMetrics& lm : m.levels) {
        m.epochs_created += lm.created;
        m.epochs_terminated += lm.terminated;
        m.epochs_natural += lm.natural;
        m.epochs_induced += lm.induced;
        m.max_charged_ratio = std::max(m.max_charged_ratio, lm.max_charged_ratio);
        m.max_rollup_ratio = std::max(m.max_rollup_ratio, lm.max_rollup_ratio);
    }
    m.epochs_alive = m.epochs_created - m.epochs_terminated;
    return m;
}

void MatchingEngine::corrupt_drop_match_for_testing(VertexId v) {
    const auto m = graph_.mate(v);
    if (!m) throw std::invalid_argument("corrupt_drop_match_for_testing: vertex is unmatched");
    graph_.clear_mates(v, *m);
}

}  // namespace dynmatch
