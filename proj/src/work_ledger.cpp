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

#include "dynmatch/work_ledger.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <stdexcept>

namespace dynmatch {

std::string to_string(EpochOrigin origin) {
    switch (origin) {
        case EpochOrigin::kInsert: return "insert";
        case EpochOrigin::kDeterministic: return "deterministic";
        case EpochOrigin::kRandom: return "random";
    }
    return "unknown";
}

std::string to_string(EpochEnd end) {
    switch (end) {
        case EpochEnd::kAlive: return "alive";
        case EpochEnd::kNatural: return "natural";
        case EpochEnd::kInduced: return "induced";
    }
    return "unknown";
}

WorkLedger::WorkLedger(VertexId n, bool deep_tracking)
    : active_by_vertex_(static_cast<std::size_t>(n), kNoEpoch), deep_tracking_(deep_tracking) {}

ChargeTarget WorkLedger::switch_to(ChargeTarget next, std::uint64_t work_now) {
    const std::uint64_t delta = work_now - mark_;
    switch (current_.kind) {
        case ChargeTarget::Kind::kOverhead: overhead_ += delta; break;
        case ChargeTarget::Kind::kEpoch: epochs_[current_.index].charged_work += delta; break;
        case ChargeTarget::Kind::kPending: pending_[current_.index] += delta; break;
    }
    mark_ = work_now;
    const ChargeTarget prev = current_;
    current_ = next;
    return prev;
}

std::uint32_t WorkLedger::open_pending() {
    pending_.push_back(0);
    return static_cast<std::uint32_t>(pending_.size() - 1);
}

std::uint64_t WorkLedger::close_pending(std::uint32_t slot) {
    if (pending_.empty() || slot + 1 != pending_.size()) {
        throw InvariantViolation("close_pending: slots must close in LIFO order");
    }
    if (current_.kind == ChargeTarget::Kind::kPending && current_.index == slot) {
        throw InvariantViolation("close_pending: slot is still the charge target");
    }
    const std::uint64_t balance = pending_.back();
    pending_.pop_back();
    return balance;
}

std::uint64_t WorkLedger::pending_balance() const {
    std::uint64_t total = 0;
    for (std::uint64_t p : pending_) total += p;
    return total;
}

std::uint64_t WorkLedger::attributed_work() const {
    std::uint64_t total = overhead_ + pending_balance();
    for (const EpochRecord& e : epochs_) total += e.charged_work;
    return total;
}

EpochId WorkLedger::on_epoch_created(VertexId initiator, VertexId partner, Level level,
                                     EpochOrigin origin, std::uint64_t step, std::uint64_t edge_tag) {
    const auto id = static_cast<EpochId>(epochs_.size());
    EpochRecord rec;
    rec.edge = Edge(initiator, partner);
    rec.level = level;
    rec.initiator = initiator;
    rec.origin = origin;
    rec.created_at = step;
    rec.edge_tag = edge_tag;
    epochs_.push_back(rec);
    active_by_vertex_[initiator] = id;
    active_by_vertex_[partner] = id;
    return id;
}

void WorkLedger::on_epoch_terminated(EpochId id, EpochEnd cause, std::uint64_t step) {
    EpochRecord& rec = epochs_[id];
    if (rec.cause != EpochEnd::kAlive) {
        throw InvariantViolation("epoch terminated twice");
    }
    rec.cause = cause;
    rec.terminated_at = step;
    active_by_vertex_[rec.edge.u] = kNoEpoch;
    active_by_vertex_[rec.edge.v] = kNoEpoch;
}

void WorkLedger::record_snapshot(EpochId id, std::vector<std::uint64_t> candidate_tags) {
    snapshots_[id] = std::move(candidate_tags);
}

const std::vector<std::uint64_t>* WorkLedger::snapshot(EpochId id) const {
    auto it = snapshots_.find(id);
    return it == snapshots_.end() ? nullptr : &it->second;
}

void WorkLedger::on_edge_deleted(std::uint64_t tag, std::uint64_t step) {
    if (deep_tracking_) deletion_log_[tag] = step;
}

std::vector<std::uint64_t> WorkLedger::recursive_costs() const {
    std::vector<std::uint64_t> rollup(epochs_.size());
    for (std::size_t i = 0; i < epochs_.size(); ++i) rollup[i] = epochs_[i].charged_work;
    // A terminator is always created after the epochs it terminates, so one
    // pass in creation order sees every child complete before its parent.
    for (std::size_t i = 0; i < epochs_.size(); ++i) {
        const std::int64_t parent = epochs_[i].terminated_by;
        if (parent == kNoEpoch) continue;
        if (static_cast<std::size_t>(parent) <= i) {
            throw InvariantViolation("terminator created before the epoch it terminated");
        }
        rollup[static_cast<std::size_t>(parent)] += rollup[i];
    }
    return rollup;
}

std::uint64_t uninterrupted_duration(const EpochRecord& epoch, std::span<const std::uint64_t> snapshot,
                                     const std::unordered_map<std::uint64_t, std::uint64_t>& deletion_log) {
    if (snapshot.empty()) {
        throw std::invalid_argument("uninterrupted_duration: missing snapshot");
    }
    auto own = deletion_log.find(epoch.edge_tag);
    if (own == deletion_log.end()) {
        throw std::invalid_argument("uninterrupted_duration: epoch edge was never deleted");
    }
    std::uint64_t count = 0;
    for (std::uint64_t tag : snapshot) {
        auto it = deletion_log.find(tag);
        if (it == deletion_log.end()) {
            throw std::invalid_argument("uninterrupted_duration: snapshot edge was never deleted");
        }
        if (it->second <= own->second) ++count;
    }
    return count;
}

std::vector<DurationSample> duration_samples(const WorkLedger& ledger, bool natural_only, Level min_level) {
    std::vector<DurationSample> out;
    const auto& epochs = ledger.epochs();
    for (std::size_t i = 0; i < epochs.size(); ++i) {
        const EpochRecord& e = epochs[i];
        if (e.level < min_level) continue;
        if (natural_only && e.cause != EpochEnd::kNatural) continue;
        const std::vector<std::uint64_t>* snap = ledger.snapshot(static_cast<EpochId>(i));
        if (snap == nullptr) continue;
        if (ledger.deletion_log().count(e.edge_tag) == 0) continue;
        out.push_back({uninterrupted_duration(e, *snap, ledger.deletion_log()), snap->size()});
    }
    return out;
}

UniformityTest duration_uniformity(std::span<const DurationSample> samples, int bins) {
    if (bins < 2) throw std::invalid_argument("duration_uniformity: need at least two bins");
    UniformityTest test;
    const auto b = static_cast<std::uint64_t>(bins);
    test.observed.assign(b, 0);
    test.expected.assign(b, 0.0);
    for (const DurationSample& s : samples) {
        if (s.population == 0 || s.duration == 0 || s.duration > s.population) {
            throw std::invalid_argument("duration_uniformity: duration outside [1, population]");
        }
        const std::uint64_t rho = s.population;
        // k/rho falls in bin j (1-based) iff (j-1)/B < k/rho <= j/B.
        const std::uint64_t j = (s.duration * b + rho - 1) / rho;
        ++test.observed[j - 1];
        for (std::uint64_t i = 1; i <= b; ++i) {
            const std::uint64_t hits = (i * rho) / b - ((i - 1) * rho) / b;
            test.expected[i - 1] += static_cast<double>(hits) / static_cast<double>(rho);
        }
        ++test.samples;
    }
    int used = 0;
    for (std::uint64_t i = 0; i < b; ++i) {
        if (test.expected[i] <= 0.0) continue;
        const double diff = static_cast<double>(test.observed[i]) - test.expected[i];
        test.chi_square += diff * diff / test.expected[i];
        ++used;
    }
    test.degrees_of_freedom = used - 1;
    if (test.degrees_of_freedom >= 1) {
        test.p_value = boost::math::gamma_q(test.degrees_of_freedom / 2.0, test.chi_square / 2.0);
    }
    return test;
}

}  // namespace dynmatch
