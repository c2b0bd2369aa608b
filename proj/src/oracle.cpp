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

#include "dynmatch/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dynmatch::oracle {

namespace {

std::pair<VertexId, VertexId> ordered(VertexId a, VertexId b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

std::uint64_t arc_key(VertexId a, VertexId b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

PlainGraph::PlainGraph(VertexId n) : n_(n) {
    if (n < 1) throw std::invalid_argument("PlainGraph: vertex count must be at least 1");
}

PlainGraph::PlainGraph(VertexId n, const std::vector<std::pair<VertexId, VertexId>>& edges) : PlainGraph(n) {
    for (const auto& [a, b] : edges) add_edge(a, b);
}

bool PlainGraph::has_edge(VertexId a, VertexId b) const { return edges_.count(ordered(a, b)) != 0; }

void PlainGraph::add_edge(VertexId a, VertexId b) {
    if (a < 0 || b < 0 || a >= n_ || b >= n_) throw std::out_of_range("PlainGraph: vertex out of range");
    if (a == b) throw std::invalid_argument("PlainGraph: self-loop");
    if (!edges_.insert(ordered(a, b)).second) throw std::invalid_argument("PlainGraph: duplicate edge");
}

void PlainGraph::remove_edge(VertexId a, VertexId b) {
    if (edges_.erase(ordered(a, b)) == 0) throw std::invalid_argument("PlainGraph: absent edge");
}

bool check_maximal(const PlainGraph& g, const PairList& m) {
    std::vector<char> covered(static_cast<std::size_t>(g.n()), 0);
    for (const auto& [a, b] : m) {
        if (!g.has_edge(a, b)) return false;
        if (covered[a] || covered[b]) return false;
        covered[a] = covered[b] = 1;
    }
    for (const auto& [a, b] : g.edges()) {
        if (!covered[a] && !covered[b]) return false;
    }
    return true;
}

namespace {

struct ExactSearch {
    std::vector<std::uint32_t> nbr;  // neighbor bitmask per vertex
    std::vector<std::int8_t> memo;   // -1 = unknown

    int best(std::uint32_t mask) {
        if (mask == 0) return 0;
        if (memo[mask] >= 0) return memo[mask];
        const int v = __builtin_ctz(mask);
        const std::uint32_t rest = mask & ~(1u << v);
        int result = best(rest);  // v stays unmatched
        for (std::uint32_t cand = nbr[v] & rest; cand != 0; cand &= cand - 1) {
            const int w = __builtin_ctz(cand);
            result = std::max(result, 1 + best(rest & ~(1u << w)));
        }
        memo[mask] = static_cast<std::int8_t>(result);
        return result;
    }
};

}  // namespace

std::size_t max_matching_size(const PlainGraph& g) {
    if (g.n() > kMaxExactVertices) {
        throw std::invalid_argument("max_matching_size: n = " + std::to_string(g.n()) + " exceeds " +
                                    std::to_string(kMaxExactVertices));
    }
    ExactSearch s;
    s.nbr.assign(static_cast<std::size_t>(g.n()), 0);
    for (const auto& [a, b] : g.edges()) {
        s.nbr[a] |= 1u << b;
        s.nbr[b] |= 1u << a;
    }
    s.memo.assign(std::size_t{1} << g.n(), -1);
    return static_cast<std::size_t>(s.best((1u << g.n()) - 1));
}

NaiveMaintainer::NaiveMaintainer(VertexId n)
    : adj_(static_cast<std::size_t>(n)), mate_(static_cast<std::size_t>(n), kNoVertex) {
    if (n < 1) throw std::invalid_argument("NaiveMaintainer: vertex count must be at least 1");
}

void NaiveMaintainer::insert(VertexId u, VertexId v) {
    const auto n = static_cast<VertexId>(adj_.size());
    if (u < 0 || v < 0 || u >= n || v >= n || u == v) throw std::invalid_argument("NaiveMaintainer: bad edge");
    if (pos_.count(arc_key(u, v)) != 0) throw std::invalid_argument("NaiveMaintainer: duplicate edge");
    pos_[arc_key(u, v)] = static_cast<std::uint32_t>(adj_[u].size());
    adj_[u].push_back(v);
    pos_[arc_key(v, u)] = static_cast<std::uint32_t>(adj_[v].size());
    adj_[v].push_back(u);
    work_ += 2;
    if (mate_[u] == kNoVertex && mate_[v] == kNoVertex) {
        mate_[u] = v;
        mate_[v] = u;
        ++matched_;
    }
}

void NaiveMaintainer::erase_from(VertexId a, VertexId b) {
    auto it = pos_.find(arc_key(a, b));
    const std::uint32_t p = it->second;
    pos_.erase(it);
    auto& list = adj_[a];
    if (p + 1 != list.size()) {
        list[p] = list.back();
        pos_[arc_key(a, list[p])] = p;
    }
    list.pop_back();
    ++work_;
}

void NaiveMaintainer::settle(VertexId z) {
    for (VertexId w : adj_[z]) {
        ++scans_;
        ++work_;
        if (mate_[w] == kNoVertex) {
            mate_[z] = w;
            mate_[w] = z;
            ++matched_;
            return;
        }
    }
}

void NaiveMaintainer::remove(VertexId u, VertexId v) {
    const auto n = static_cast<VertexId>(adj_.size());
    if (u < 0 || v < 0 || u >= n || v >= n || pos_.count(arc_key(u, v)) == 0) {
        throw std::invalid_argument("NaiveMaintainer: absent edge");
    }
    erase_from(u, v);
    erase_from(v, u);
    if (mate_[u] == v) {
        mate_[u] = mate_[v] = kNoVertex;
        --matched_;
        settle(u);
        if (mate_[v] == kNoVertex) settle(v);
    }
}

void NaiveMaintainer::apply(const UpdateEvent& e) {
    if (e.op == UpdateOp::kInsert) {
        insert(e.u, e.v);
    } else {
        remove(e.u, e.v);
    }
}

PairList NaiveMaintainer::matching() const {
    PairList out;
    for (VertexId v = 0; v < static_cast<VertexId>(mate_.size()); ++v) {
        if (mate_[v] != kNoVertex && v < mate_[v]) out.emplace_back(v, mate_[v]);
    }
    return out;
}

std::vector<PairList> naive_maintainer(const Trace& trace) {
    validate(trace);
    NaiveMaintainer m(trace.n);
    std::vector<PairList> out;
    out.reserve(trace.events.size());
    for (const UpdateEvent& e : trace.events) {
        m.apply(e);
        out.push_back(m.matching());
    }
    return out;
}

}  // namespace dynmatch::oracle
