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

#ifndef DYNMATCH_WORK_LEDGER_HPP_
#define DYNMATCH_WORK_LEDGER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynmatch/types.hpp"

namespace dynmatch {

using EpochId = std::uint32_t;
inline constexpr std::int64_t kNoEpoch = -1;
inline constexpr std::uint64_t kStillAlive = ~std::uint64_t{0};

enum class EpochOrigin : std::uint8_t { kInsert, kDeterministic, kRandom };
enum class EpochEnd : std::uint8_t { kAlive, kNatural, kInduced };

std::string to_string(EpochOrigin origin);
std::string to_string(EpochEnd end);

/// Lifecycle of one matched edge.
struct EpochRecord {
    Edge edge;
    Level level = 0;
    VertexId initiator = kNoVertex;
    EpochOrigin origin = EpochOrigin::kInsert;
    EpochEnd cause = EpochEnd::kAlive;
    std::uint64_t created_at = 0;
    std::uint64_t terminated_at = kStillAlive;
    std::uint64_t charged_work = 0;
    /// For induced epochs: the epoch whose creation ended this one.
    std::int64_t terminated_by = kNoEpoch;
    /// Occurrence label of the matched edge (its insertion step).
    std::uint64_t edge_tag = 0;
};

/// Where elementary work is currently being attributed.
struct ChargeTarget {
    enum class Kind : std::uint8_t { kOverhead, kEpoch, kPending };
    Kind kind = Kind::kOverhead;
    std::uint32_t index = 0;

    static ChargeTarget overhead() { return {Kind::kOverhead, 0}; }
    static ChargeTarget epoch(EpochId id) { return {Kind::kEpoch, id}; }
    static ChargeTarget pending(std::uint32_t slot) { return {Kind::kPending, slot}; }
};

/// Epoch ledger and cost redistribution.
///
/// The ledger never counts work itself. Callers report the running total of
/// elementary work whenever the charge target changes, and the difference
/// since the previous switch lands on the outgoing target. Pending slots are
/// a LIFO stack of scratch accumulators used while the epoch that will pay
/// for some work does not exist yet.
class WorkLedger {
public:
    WorkLedger() = default;
    WorkLedger(VertexId n, bool deep_tracking);

    bool deep_tracking() const { return deep_tracking_; }

    /// Attributes work done since the last switch to the current target and
    /// makes `next` current. Returns the previous target.
    ChargeTarget switch_to(ChargeTarget next, std::uint64_t work_now);
    void flush(std::uint64_t work_now) { switch_to(current_, work_now); }
    ChargeTarget current() const { return current_; }

    std::uint32_t open_pending();
    /// Pops the top pending slot and returns its balance.
    std::uint64_t close_pending(std::uint32_t slot);
    void charge(EpochId id, std::uint64_t amount) { epochs_[id].charged_work += amount; }

    EpochId on_epoch_created(VertexId initiator, VertexId partner, Level level, EpochOrigin origin,
                             std::uint64_t step, std::uint64_t edge_tag);
    void on_epoch_terminated(EpochId id, EpochEnd cause, std::uint64_t step);
    void set_terminator(EpochId child, EpochId parent) { epochs_[child].terminated_by = parent; }
    /// Epoch currently held by matched vertex v.
    std::int64_t active_epoch(VertexId v) const { return active_by_vertex_[v]; }

    /// Deep tracking: the candidate population the initiator drew from.
    void record_snapshot(EpochId id, std::vector<std::uint64_t> candidate_tags);
    const std::vector<std::uint64_t>* snapshot(EpochId id) const;
    /// Deep tracking: edge occurrence `tag` left the graph at `step`.
    void on_edge_deleted(std::uint64_t tag, std::uint64_t step);
    const std::unordered_map<std::uint64_t, std::uint64_t>& deletion_log() const { return deletion_log_; }

    const std::vector<EpochRecord>& epochs() const { return epochs_; }
    std::uint64_t overhead_work() const { return overhead_; }
    std::uint64_t pending_balance() const;
    std::uint64_t attributed_work() const;

    /// Recursive cost of every epoch: its own charge plus the recursive cost
    /// of each induced epoch its creation terminated.
    std::vector<std::uint64_t> recursive_costs() const;

private:
    std::vector<EpochRecord> epochs_;
    std::vector<std::int64_t> active_by_vertex_;
    std::vector<std::uint64_t> pending_;
    std::unordered_map<EpochId, std::vector<std::uint64_t>> snapshots_;
    std::unordered_map<std::uint64_t, std::uint64_t> deletion_log_;
    ChargeTarget current_ = ChargeTarget::overhead();
    std::uint64_t mark_ = 0;
    std::uint64_t overhead_ = 0;
    bool deep_tracking_ = false;
};

/// Number of snapshot edges deleted from the graph up to and including the
/// deletion of the epoch's own edge. Throws when the snapshot or any needed
/// deletion is missing.
std::uint64_t uninterrupted_duration(const EpochRecord& epoch, std::span<const std::uint64_t> snapshot,
                                     const std::unordered_map<std::uint64_t, std::uint64_t>& deletion_log);

/// One observed uninterrupted duration k out of a population of size rho.
struct DurationSample {
    std::uint64_t duration = 0;
    std::uint64_t population = 0;
};

/// Pearson goodness-of-fit of normalized durations k/rho against the
/// discrete uniform law on {1/rho, ..., 1}, pooled over samples with
/// heterogeneous rho. Expected bin counts are exact per sample.
struct UniformityTest {
    std::size_t samples = 0;
    std::vector<std::uint64_t> observed;
    std::vector<double> expected;
    double chi_square = 0.0;
    int degrees_of_freedom = 0;
    double p_value = 1.0;
};

/// Uninterrupted durations of epochs of level >= min_level that carry a
/// snapshot and whose own edge has left the graph. With `natural_only`, epochs
/// ended by the algorithm are skipped. Snapshot edges still present are
/// rejected, so the trace must end with an empty graph.
std::vector<DurationSample> duration_samples(const WorkLedger& ledger, bool natural_only, Level min_level = 1);

UniformityTest duration_uniformity(std::span<const DurationSample> samples, int bins = 10);

}  // namespace dynmatch

#endif  // DYNMATCH_WORK_LEDGER_HPP_
