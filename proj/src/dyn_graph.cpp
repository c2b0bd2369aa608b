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

#include "dynmatch/dyn_graph.hpp"

#include <algorithm>
#include <sstream>

namespace dynmatch {

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::kOrientation: return "orientation";
        case ViolationKind::kMutualConsistency: return "mutual-consistency";
        case ViolationKind::kCrossRef: return "cross-ref";
        case ViolationKind::kBucketKey: return "bucket-key-range";
        case ViolationKind::kEmptyBucket: return "empty-bucket";
        case ViolationKind::kMateSymmetry: return "mate-symmetry";
        case ViolationKind::kMatchedLevel: return "matched-level";
        case ViolationKind::kFreeNormalForm: return "free-normal-form";
        case ViolationKind::kMaximality: return "maximality";
        case ViolationKind::kTemporarilyFree: return "temporarily-free";
        case ViolationKind::kLevelRange: return "level-range";
        case ViolationKind::kSpace: return "space-linearity";
    }
    return "unknown";
}

DynGraph::DynGraph(VertexId n, Level level_limit) {
    if (n < 1) {
        throw std::invalid_argument("DynGraph: vertex count must be at least 1");
    }
    vertices_.resize(static_cast<std::size_t>(n));
    level_limit_ = level_limit < 0 ? max_level_for(n) : level_limit;
}

std::optional<VertexId> DynGraph::mate(VertexId v) const {
    const VertexId m = vertices_[check(v)].mate;
    if (m == kNoVertex) return std::nullopt;
    return m;
}

const Bucket* DynGraph::find_bucket(VertexId v, Level l) const {
    for (const Bucket& b : vertices_[v].incoming) {
        if (b.level == l) return &b;
        if (b.level > l) break;
    }
    return nullptr;
}

Bucket* DynGraph::find_bucket(VertexId v, Level l) {
    return const_cast<Bucket*>(std::as_const(*this).find_bucket(v, l));
}

Bucket& DynGraph::bucket_for_insert(VertexId v, Level l) {
    auto& buckets = vertices_[v].incoming;
    auto it = std::lower_bound(buckets.begin(), buckets.end(), l,
                               [](const Bucket& b, Level key) { return b.level < key; });
    if (it != buckets.end() && it->level == l) return *it;
    it = buckets.insert(it, Bucket{l, {}});
    return *it;
}

void DynGraph::erase_bucket_if_empty(VertexId v, Level l) {
    auto& buckets = vertices_[v].incoming;
    for (auto it = buckets.begin(); it != buckets.end(); ++it) {
        if (it->level == l) {
            if (it->items.empty()) buckets.erase(it);
            return;
        }
    }
}

std::size_t DynGraph::incoming_size(VertexId v, Level l) const {
    const Bucket* b = find_bucket(check(v), l);
    return b == nullptr ? 0 : b->items.size();
}

void DynGraph::push_out(VertexId tail, EdgeId e) {
    auto& out_list = vertices_[tail].out;
    edges_[e].out_pos = static_cast<std::uint32_t>(out_list.size());
    out_list.push_back(Slot{edges_[e].head, e});
    counters_.mutate();
}

void DynGraph::push_in(VertexId head, Level l, EdgeId e) {
    Bucket& b = bucket_for_insert(head, l);
    counters_.read_bucket();
    edges_[e].in_pos = static_cast<std::uint32_t>(b.items.size());
    b.items.push_back(Slot{edges_[e].tail, e});
    counters_.mutate();
}

void DynGraph::erase_out(EdgeId e) {
    auto& out_list = vertices_[edges_[e].tail].out;
    const std::uint32_t pos = edges_[e].out_pos;
    if (pos + 1 != out_list.size()) {
        out_list[pos] = out_list.back();
        edges_[out_list[pos].edge].out_pos = pos;
    }
    out_list.pop_back();
    counters_.mutate();
}

void DynGraph::erase_in(EdgeId e, Level tail_level) {
    const VertexId head = edges_[e].head;
    Bucket* b = find_bucket(head, tail_level);
    counters_.read_bucket();
    if (b == nullptr) {
        throw InvariantViolation("erase_in: missing incoming bucket");
    }
    const std::uint32_t pos = edges_[e].in_pos;
    if (pos + 1 != b->items.size()) {
        b->items[pos] = b->items.back();
        edges_[b->items[pos].edge].in_pos = pos;
    }
    b->items.pop_back();
    counters_.mutate();
    if (b->items.empty()) erase_bucket_if_empty(head, tail_level);
}

EdgeId DynGraph::find_edge(VertexId u, VertexId v) const {
    auto it = edge_index_.find(edge_key(u, v));
    if (it == edge_index_.end()) {
        throw std::invalid_argument("edge {" + std::to_string(u) + "," + std::to_string(v) +
                                    "} is not present");
    }
    return it->second;
}

bool DynGraph::has_edge(VertexId u, VertexId v) const {
    check(u);
    check(v);
    return edge_index_.count(edge_key(u, v)) != 0;
}

VertexId DynGraph::tail_of(VertexId u, VertexId v) const {
    check(u);
    check(v);
    return edges_[find_edge(u, v)].tail;
}

std::uint64_t DynGraph::edge_tag(VertexId u, VertexId v) const {
    check(u);
    check(v);
    return edges_[find_edge(u, v)].tag;
}

void DynGraph::add_arc(VertexId tail, VertexId head, std::uint64_t tag) {
    check(tail);
    check(head);
    if (tail == head) {
        throw std::invalid_argument("add_arc: self-loop on " + std::to_string(tail));
    }
    const std::uint64_t key = edge_key(tail, head);
    if (edge_index_.count(key) != 0) {
        throw std::invalid_argument("add_arc: duplicate edge {" + std::to_string(tail) + "," +
                                    std::to_string(head) + "}");
    }
    EdgeId e;
    if (!free_edge_ids_.empty()) {
        e = free_edge_ids_.back();
        free_edge_ids_.pop_back();
    } else {
        e = static_cast<EdgeId>(edges_.size());
        edges_.emplace_back();
    }
    EdgeRecord& rec = edges_[e];
    rec.tail = tail;
    rec.head = head;
    rec.tag = tag;
    rec.live = true;
    edge_index_.emplace(key, e);
    push_out(tail, e);
    push_in(head, vertices_[tail].level, e);
}

RemovedEdge DynGraph::remove_edge(VertexId u, VertexId v) {
    check(u);
    check(v);
    const EdgeId e = find_edge(u, v);
    const EdgeRecord rec = edges_[e];
    erase_out(e);
    erase_in(e, vertices_[rec.tail].level);
    edge_index_.erase(edge_key(u, v));
    edges_[e].live = false;
    free_edge_ids_.push_back(e);
    return RemovedEdge{rec.tail, rec.head, vertices_[u].mate == v, rec.tag};
}

void DynGraph::set_level(VertexId v, Level target) {
    check(v);
    if (target < kFreeLevel || target > level_limit_) {
        throw std::invalid_argument("set_level: level " + std::to_string(target) +
                                    " outside [-1, " + std::to_string(level_limit_) + "]");
    }
    VertexRecord& rec = vertices_[v];
    const Level old = rec.level;
    if (target == old) return;

    if (target < old) {
        // Outgoing neighbors above the new level become incoming; the others
        // only learn v's new level.
        std::size_t i = 0;
        while (i < rec.out.size()) {
            const Slot s = rec.out[i];
            counters_.scan();
            const Level lw = vertices_[s.other].level;
            erase_in(s.edge, old);
            if (lw >= target + 1) {
                erase_out(s.edge);
                EdgeRecord& er = edges_[s.edge];
                er.tail = s.other;
                er.head = v;
                push_out(s.other, s.edge);
                push_in(v, lw, s.edge);
                ++counters_.flips;
            } else {
                push_in(s.other, target, s.edge);
                ++i;
            }
        }
    } else {
        for (const Slot& s : rec.out) {
            counters_.scan();
            erase_in(s.edge, old);
            push_in(s.other, target, s.edge);
        }
        // Incoming neighbors strictly below the new level become outgoing.
        std::size_t flipped_buckets = 0;
        for (std::size_t bi = 0; bi < rec.incoming.size(); ++bi) {
            counters_.read_bucket();
            if (rec.incoming[bi].level >= target) break;
            for (const Slot& s : rec.incoming[bi].items) {
                counters_.scan();
                erase_out(s.edge);
                EdgeRecord& er = edges_[s.edge];
                er.tail = v;
                er.head = s.other;
                counters_.mutate();  // removal from v's bucket
                push_out(v, s.edge);
                push_in(s.other, target, s.edge);
                ++counters_.flips;
            }
            ++flipped_buckets;
        }
        rec.incoming.erase(rec.incoming.begin(),
                           rec.incoming.begin() + static_cast<std::ptrdiff_t>(flipped_buckets));
    }
    rec.level = target;
}

std::size_t DynGraph::phi(VertexId v, Level l) const {
    const VertexRecord& rec = vertices_[check(v)];
    if (l <= rec.level) {
        throw std::invalid_argument("phi: level " + std::to_string(l) +
                                    " must exceed the vertex level " + std::to_string(rec.level));
    }
    std::size_t count = rec.out.size();
    for (const Bucket& b : rec.incoming) {
        if (b.level >= l) break;
        count += b.items.size();
    }
    return count;
}

void DynGraph::set_mates(VertexId u, VertexId v) {
    check(u);
    check(v);
    if (u == v) throw std::invalid_argument("set_mates: a vertex cannot be its own mate");
    if (vertices_[u].mate != kNoVertex || vertices_[v].mate != kNoVertex) {
        throw std::invalid_argument("set_mates: endpoint already matched");
    }
    vertices_[u].mate = v;
    vertices_[v].mate = u;
    ++matched_edges_;
}

void DynGraph::clear_mates(VertexId u, VertexId v) {
    check(u);
    check(v);
    if (vertices_[u].mate != v || vertices_[v].mate != u) {
        throw std::invalid_argument("clear_mates: vertices are not mates");
    }
    vertices_[u].mate = kNoVertex;
    vertices_[v].mate = kNoVertex;
    --matched_edges_;
}

void DynGraph::corrupt_incoming_for_testing(VertexId head, VertexId tail) {
    const EdgeId e = find_edge(check(head), check(tail));
    if (edges_[e].head != head) throw std::invalid_argument("corrupt_incoming_for_testing: edge not oriented into head");
    erase_in(e, vertices_[tail].level);
}

SpaceUsage DynGraph::space_usage() const {
    SpaceUsage s;
    for (const VertexRecord& rec : vertices_) {
        s.out_entries += rec.out.size();
        s.buckets += rec.incoming.size();
        for (const Bucket& b : rec.incoming) s.incoming_entries += b.items.size();
    }
    s.edges = edge_index_.size();
    return s;
}

std::vector<Violation> DynGraph::consistency_check() const {
    std::vector<Violation> found;
    auto report = [&found](ViolationKind kind, auto&&... parts) {
        std::ostringstream os;
        (os << ... << parts);
        found.push_back(Violation{kind, os.str()});
    };

    const auto n = static_cast<VertexId>(vertices_.size());
    std::size_t matched_endpoints = 0;
    for (VertexId v = 0; v < n; ++v) {
        const VertexRecord& rec = vertices_[v];
        if (rec.level < kFreeLevel || rec.level > level_limit_) {
            report(ViolationKind::kLevelRange, "vertex ", v, " has level ", rec.level);
        }
        for (std::size_t i = 0; i < rec.out.size(); ++i) {
            const Slot& s = rec.out[i];
            if (s.edge >= edges_.size() || !edges_[s.edge].live) {
                report(ViolationKind::kCrossRef, "vertex ", v, " out[", i, "] names a dead edge");
                continue;
            }
            const EdgeRecord& er = edges_[s.edge];
            if (er.tail != v || er.head != s.other || er.out_pos != i) {
                report(ViolationKind::kCrossRef, "vertex ", v, " out[", i, "] disagrees with edge record");
                continue;
            }
            if (s.other < 0 || s.other >= n) continue;
            if (vertices_[s.other].level > rec.level) {
                report(ViolationKind::kOrientation, "arc ", v, "->", s.other, " points upward (",
                       rec.level, " < ", vertices_[s.other].level, ")");
            }
            const Bucket* b = find_bucket(s.other, rec.level);
            if (b == nullptr || er.in_pos >= b->items.size() || b->items[er.in_pos].other != v ||
                b->items[er.in_pos].edge != s.edge) {
                report(ViolationKind::kMutualConsistency, s.other, " in out(", v, ") but ", v,
                       " missing from incoming(", s.other, ")[", rec.level, "]");
            }
        }
        Level prev = std::numeric_limits<Level>::min();
        for (const Bucket& b : rec.incoming) {
            if (b.level <= prev) {
                report(ViolationKind::kBucketKey, "vertex ", v, " buckets not strictly sorted");
            }
            prev = b.level;
            if (b.items.empty()) {
                report(ViolationKind::kEmptyBucket, "vertex ", v, " stores empty bucket ", b.level);
            }
            if (b.level < std::max<Level>(rec.level, 0)) {
                report(ViolationKind::kBucketKey, "vertex ", v, " at level ", rec.level,
                       " has bucket key ", b.level);
            }
            for (std::size_t j = 0; j < b.items.size(); ++j) {
                const Slot& s = b.items[j];
                if (s.edge >= edges_.size() || !edges_[s.edge].live) {
                    report(ViolationKind::kCrossRef, "vertex ", v, " bucket ", b.level, " names a dead edge");
                    continue;
                }
                const EdgeRecord& er = edges_[s.edge];
                if (er.head != v || er.tail != s.other || er.in_pos != j) {
                    report(ViolationKind::kCrossRef, "vertex ", v, " bucket ", b.level, "[", j,
                           "] disagrees with edge record");
                    continue;
                }
                if (vertices_[s.other].level != b.level) {
                    report(ViolationKind::kMutualConsistency, "vertex ", s.other, " filed under level ",
                           b.level, " of ", v, " but sits at ", vertices_[s.other].level);
                }
            }
        }

        if (rec.temporarily_free) {
            report(ViolationKind::kTemporarilyFree, "vertex ", v, " left temporarily free");
        }
        if (rec.mate != kNoVertex) {
            ++matched_endpoints;
            const VertexId m = rec.mate;
            if (m < 0 || m >= n || m == v || vertices_[m].mate != v) {
                report(ViolationKind::kMateSymmetry, "mate(", v, ") = ", m, " is not symmetric");
                continue;
            }
            if (edge_index_.count(edge_key(v, m)) == 0) {
                report(ViolationKind::kMateSymmetry, "matched pair {", v, ",", m, "} is not an edge");
            }
            if (rec.level < 0 || rec.level != vertices_[m].level) {
                report(ViolationKind::kMatchedLevel, "matched pair {", v, ",", m, "} at levels ",
                       rec.level, "/", vertices_[m].level);
            }
        } else if (!rec.temporarily_free && (rec.level != kFreeLevel || !rec.out.empty())) {
            report(ViolationKind::kFreeNormalForm, "free vertex ", v, " at level ", rec.level,
                   " with out-degree ", rec.out.size());
        }
    }
    if (matched_endpoints != 2 * matched_edges_) {
        report(ViolationKind::kMateSymmetry, "matched edge counter ", matched_edges_, " vs ",
               matched_endpoints, " matched endpoints");
    }

    for (const auto& [key, e] : edge_index_) {
        const EdgeRecord& er = edges_[e];
        if (!er.live || edge_key(er.tail, er.head) != key) {
            report(ViolationKind::kCrossRef, "edge index entry ", key, " disagrees with record");
            continue;
        }
        if (vertices_[er.tail].mate == kNoVertex && vertices_[er.head].mate == kNoVertex) {
            report(ViolationKind::kMaximality, "edge {", er.tail, ",", er.head,
                   "} has two unmatched endpoints");
        }
    }

    const SpaceUsage space = space_usage();
    if (space.list_entries() != 2 * space.edges) {
        report(ViolationKind::kSpace, space.list_entries(), " list entries for ", space.edges, " edges");
    }
    if (space.buckets > space.edges) {
        report(ViolationKind::kSpace, space.buckets, " buckets for ", space.edges, " edges");
    }
    return found;
}

}  // namespace dynmatch
