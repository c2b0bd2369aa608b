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

#ifndef DYNMATCH_ORACLE_HPP_
#define DYNMATCH_ORACLE_HPP_

#include <cstdint>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dynmatch/types.hpp"
#include "dynmatch/workload.hpp"

// Reference implementations for differential testing. Nothing here touches
// the leveled graph store.
namespace dynmatch::oracle {

/// Undirected simple graph as a plain ordered set of pairs (a < b).
class PlainGraph {
public:
    explicit PlainGraph(VertexId n);
    PlainGraph(VertexId n, const std::vector<std::pair<VertexId, VertexId>>& edges);

    VertexId n() const { return n_; }
    const std::set<std::pair<VertexId, VertexId>>& edges() const { return edges_; }
    bool has_edge(VertexId a, VertexId b) const;
    void add_edge(VertexId a, VertexId b);
    void remove_edge(VertexId a, VertexId b);

private:
    VertexId n_;
    std::set<std::pair<VertexId, VertexId>> edges_;
};

using PairList = std::vector<std::pair<VertexId, VertexId>>;

/// m is a subset of g, vertex-disjoint, and leaves no edge of g uncovered.
bool check_maximal(const PlainGraph& g, const PairList& m);

inline constexpr VertexId kMaxExactVertices = 22;

/// Exact maximum matching cardinality by memoized search over vertex
/// subsets. Rejects n > kMaxExactVertices.
std::size_t max_matching_size(const PlainGraph& g);

/// The simple dynamic maintainer: on a matched-edge deletion each freed
/// endpoint scans its neighbors for a free vertex.
class NaiveMaintainer {
public:
    explicit NaiveMaintainer(VertexId n);

    void insert(VertexId u, VertexId v);
    void remove(VertexId u, VertexId v);
    void apply(const UpdateEvent& e);

    VertexId mate(VertexId v) const { return mate_[v]; }
    PairList matching() const;
    std::size_t matching_size() const { return matched_; }
    /// Neighbor scans plus list mutations.
    std::uint64_t work() const { return work_; }
    std::uint64_t scans() const { return scans_; }

private:
    void settle(VertexId z);
    void erase_from(VertexId a, VertexId b);

    std::vector<std::vector<VertexId>> adj_;
    std::unordered_map<std::uint64_t, std::uint32_t> pos_;  // (a, b) -> index of b in adj_[a]
    std::vector<VertexId> mate_;
    std::size_t matched_ = 0;
    std::uint64_t work_ = 0;
    std::uint64_t scans_ = 0;
};

/// Matching after every step of the trace.
std::vector<PairList> naive_maintainer(const Trace& trace);

}  // namespace dynmatch::oracle

#endif  // DYNMATCH_ORACLE_HPP_
