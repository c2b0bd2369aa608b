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

#ifndef DYNMATCH_DYN_GRAPH_HPP_
#define DYNMATCH_DYN_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynmatch/random.hpp"
#include "dynmatch/types.hpp"

namespace dynmatch {

/// Elementary-operation counters. One list mutation, one bucket lookup or one
/// neighbor scan each cost one unit of work.
struct WorkCounters {
    std::uint64_t work = 0;
    std::uint64_t mutations = 0;
    std::uint64_t bucket_reads = 0;
    std::uint64_t scans = 0;
    std::uint64_t flips = 0;

    void mutate(std::uint64_t k = 1) {
        mutations += k;
        work += k;
    }
    void read_bucket(std::uint64_t k = 1) {
        bucket_reads += k;
        work += k;
    }
    void scan(std::uint64_t k = 1) {
        scans += k;
        work += k;
    }
};

/// An entry of an outgoing list or an incoming bucket: the neighbor at the
/// other end and the handle of the shared edge record.
struct Slot {
    VertexId other = kNoVertex;
    EdgeId edge = 0;
};

/// Incoming neighbors of one vertex that sit at one level. Never stored empty.
struct Bucket {
    Level level = 0;
    std::vector<Slot> items;
};

struct VertexRecord {
    Level level = kFreeLevel;
    VertexId mate = kNoVertex;
    bool temporarily_free = false;
    std::vector<Slot> out;
    std::vector<Bucket> incoming;  // sorted by level
};

/// Cross-reference record of one undirected edge: its orientation and the
/// positions of its two list occurrences.
struct EdgeRecord {
    VertexId tail = kNoVertex;
    VertexId head = kNoVertex;
    std::uint32_t out_pos = 0;  // index of head in tail.out
    std::uint32_t in_pos = 0;   // index of tail in head.incoming[level(tail)]
    std::uint64_t tag = 0;      // caller-defined occurrence label
    bool live = false;
};

struct RemovedEdge {
    VertexId tail = kNoVertex;
    VertexId head = kNoVertex;
    bool matched = false;
    std::uint64_t tag = 0;
};

enum class ViolationKind {
    kOrientation,
    kMutualConsistency,
    kCrossRef,
    kBucketKey,
    kEmptyBucket,
    kMateSymmetry,
    kMatchedLevel,
    kFreeNormalForm,
    kMaximality,
    kTemporarilyFree,
    kLevelRange,
    kSpace,
};

std::string to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string detail;
};

/// Space accounting used by the linearity checks.
struct SpaceUsage {
    std::size_t out_entries = 0;
    std::size_t incoming_entries = 0;
    std::size_t buckets = 0;
    std::size_t edges = 0;

    std::size_t list_entries() const { return out_entries + incoming_entries; }
};

/// Leveled, oriented adjacency store over a fixed vertex set.
///
/// Every edge is oriented toward its endpoint of weakly lower level. Each
/// vertex keeps the array of its outgoing neighbors and, for every level that
/// is populated, the array of incoming neighbors at that level. Both arrays
/// support O(1) append, O(1) removal through the position stored in the edge
/// record, and O(1) uniform sampling.
///
/// The store also holds the mate fields of the matching; it does not decide
/// anything about the matching itself.
class DynGraph {
public:
    /// `level_limit` < 0 selects the uncapped default max(0, floor(log3(n-1))).
    explicit DynGraph(VertexId n, Level level_limit = -1);

    VertexId num_vertices() const { return static_cast<VertexId>(vertices_.size()); }
    std::size_t num_edges() const { return edge_index_.size(); }
    Level level_limit() const { return level_limit_; }

    Level level(VertexId v) const { return vertices_[check(v)].level; }
    std::optional<VertexId> mate(VertexId v) const;
    bool is_matched(VertexId v) const { return vertices_[check(v)].mate != kNoVertex; }
    bool is_temporarily_free(VertexId v) const { return vertices_[check(v)].temporarily_free; }
    std::size_t out_degree(VertexId v) const { return vertices_[check(v)].out.size(); }
    std::span<const Slot> out(VertexId v) const { return vertices_[check(v)].out; }
    std::span<const Bucket> incoming(VertexId v) const { return vertices_[check(v)].incoming; }
    /// Size of incoming[l], 0 when the bucket is absent.
    std::size_t incoming_size(VertexId v, Level l) const;
    bool has_edge(VertexId u, VertexId v) const;
    /// Tail of the edge {u, v}; the edge must exist.
    VertexId tail_of(VertexId u, VertexId v) const;
    std::uint64_t edge_tag(VertexId u, VertexId v) const;
    std::uint64_t edge_tag(const Slot& s) const { return edges_[s.edge].tag; }
    std::size_t matched_edge_count() const { return matched_edges_; }

    /// Inserts the new edge {tail, head} oriented tail -> head.
    void add_arc(VertexId tail, VertexId head, std::uint64_t tag = 0);

    /// Removes edge {u, v} from both lists it occurs in. The mate fields are
    /// left untouched; `matched` reports whether u and v were mates.
    RemovedEdge remove_edge(VertexId u, VertexId v);

    /// Moves v to level `target`, re-orienting the edges incident on v so that
    /// every edge points toward its endpoint of weakly lower level.
    void set_level(VertexId v, Level target);

    /// Number of neighbors of v with level < l, for l > level(v).
    std::size_t phi(VertexId v, Level l) const;

    /// Uniformly random outgoing neighbor of v.
    template <class Rng>
    VertexId random_out_neighbor(VertexId v, Rng& rng) {
        const auto& out_list = vertices_[check(v)].out;
        if (out_list.empty()) {
            throw std::invalid_argument("random_out_neighbor: empty outgoing list");
        }
        counters_.scan();
        return out_list[uniform_index(rng, out_list.size())].other;
    }

    void set_mates(VertexId u, VertexId v);
    void clear_mates(VertexId u, VertexId v);
    void set_temporarily_free(VertexId v, bool flag) { vertices_[check(v)].temporarily_free = flag; }

    /// Every violated structural or matching invariant; empty when the state
    /// is a valid between-updates state.
    std::vector<Violation> consistency_check() const;
    SpaceUsage space_usage() const;

    /// Test hook: drops tail from head's incoming bucket but keeps the
    /// outgoing entry, breaking mutual consistency on purpose.
    void corrupt_incoming_for_testing(VertexId head, VertexId tail);

    const WorkCounters& counters() const { return counters_; }
    WorkCounters& counters() { return counters_; }

    /// Uniform integer in [0, bound) by rejection; platform independent.
    template <class Rng>
    static std::size_t uniform_index(Rng& rng, std::size_t bound) {
        return static_cast<std::size_t>(rnd::uniform_index(rng, bound));
    }

private:
    VertexId check(VertexId v) const {
        if (v < 0 || v >= static_cast<VertexId>(vertices_.size())) {
            throw std::out_of_range("vertex id out of range: " + std::to_string(v));
        }
        return v;
    }

    Bucket* find_bucket(VertexId v, Level l);
    const Bucket* find_bucket(VertexId v, Level l) const;
    Bucket& bucket_for_insert(VertexId v, Level l);
    void erase_bucket_if_empty(VertexId v, Level l);

    void push_out(VertexId tail, EdgeId e);
    void push_in(VertexId head, Level l, EdgeId e);
    void erase_out(EdgeId e);
    void erase_in(EdgeId e, Level tail_level);

    EdgeId find_edge(VertexId u, VertexId v) const;

    std::vector<VertexRecord> vertices_;
    std::vector<EdgeRecord> edges_;
    std::vector<EdgeId> free_edge_ids_;
    std::unordered_map<std::uint64_t, EdgeId> edge_index_;
    std::size_t matched_edges_ = 0;
    Level level_limit_ = 0;
    WorkCounters counters_;
};

}  // namespace dynmatch

#endif  // DYNMATCH_DYN_GRAPH_HPP_
