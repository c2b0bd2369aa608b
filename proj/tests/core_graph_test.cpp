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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "dynmatch/dyn_graph.hpp"
#include "test_support.hpp"

namespace dynmatch {
namespace {

using testing::incoming_ids;
using testing::out_ids;
using testing::structural_violations;

// Largest k with 3^k <= x, by floating point; an independent check of the
// integer routine.
Level float_log3(double x) { return static_cast<Level>(std::floor(std::log(x) / std::log(3.0) + 1e-9)); }

TEST(CoreGraph, NewGraphStartsEmpty) {
    DynGraph g(5);
    EXPECT_EQ(g.num_vertices(), 5);
    EXPECT_EQ(g.num_edges(), 0u);
    for (VertexId v = 0; v < 5; ++v) {
        EXPECT_EQ(g.level(v), kFreeLevel);
        EXPECT_FALSE(g.mate(v).has_value());
        EXPECT_EQ(g.out_degree(v), 0u);
        EXPECT_TRUE(g.incoming(v).empty());
    }
    EXPECT_TRUE(g.consistency_check().empty());
}

TEST(CoreGraph, DegenerateLevelLimits) {
    EXPECT_EQ(DynGraph(1).level_limit(), 0);
    EXPECT_EQ(DynGraph(2).level_limit(), 0);
    EXPECT_EQ(DynGraph(28).level_limit(), 3);
    EXPECT_EQ(DynGraph(28).level_limit(), float_log3(27));
    EXPECT_THROW(DynGraph(0), std::invalid_argument);
}

TEST(CoreGraph, LevelLimitMatchesLogarithm) {
    for (VertexId n = 3; n < 5000; n += 7) {
        EXPECT_EQ(max_level_for(n), float_log3(n - 1)) << "n=" << n;
    }
    for (VertexId n : {4, 10, 28, 82, 244, 730}) {  // n - 1 a power of three
        EXPECT_EQ(max_level_for(n), float_log3(n - 1));
    }
}

TEST(CoreGraph, AddArcRegistersBothOccurrences) {
    DynGraph g(10);
    g.set_level(0, 2);
    g.set_level(1, 0);
    g.add_arc(0, 1);
    EXPECT_EQ(out_ids(g, 0), std::vector<VertexId>{1});
    EXPECT_EQ(incoming_ids(g, 1, 2), std::vector<VertexId>{0});
    EXPECT_EQ(g.tail_of(1, 0), 0);
}

TEST(CoreGraph, AddArcRejectsBadEdges) {
    DynGraph g(4);
    g.add_arc(0, 1);
    EXPECT_THROW(g.add_arc(0, 1), std::invalid_argument);
    EXPECT_THROW(g.add_arc(1, 0), std::invalid_argument);
    EXPECT_THROW(g.add_arc(2, 2), std::invalid_argument);
    EXPECT_THROW(g.add_arc(0, 9), std::out_of_range);
}

TEST(CoreGraph, AddThenRemoveLeavesNoTrace) {
    DynGraph g(6);
    g.set_level(2, 1);
    g.set_level(3, 1);
    g.add_arc(2, 3);
    const RemovedEdge r = g.remove_edge(3, 2);
    EXPECT_EQ(r.tail, 2);
    EXPECT_EQ(r.head, 3);
    EXPECT_FALSE(r.matched);
    EXPECT_TRUE(g.out(2).empty());
    EXPECT_TRUE(g.incoming(3).empty());
    EXPECT_FALSE(g.has_edge(2, 3));
    EXPECT_EQ(g.space_usage().list_entries(), 0u);
    EXPECT_THROW(g.remove_edge(2, 3), std::invalid_argument);
}

TEST(CoreGraph, RemoveReportsMatchedEdge) {
    DynGraph g(4);
    g.add_arc(0, 1);
    g.set_mates(0, 1);
    EXPECT_TRUE(g.remove_edge(0, 1).matched);
    EXPECT_EQ(g.mate(0), 1);  // matching untouched by the store
}

TEST(CoreGraph, LastIncomingRemovalDropsBucketKey) {
    DynGraph g(10);
    g.set_level(0, 1);
    g.set_level(1, 2);
    g.set_level(2, 0);
    g.add_arc(0, 2);
    g.add_arc(1, 2);
    ASSERT_EQ(g.incoming(2).size(), 2u);
    g.remove_edge(1, 2);
    ASSERT_EQ(g.incoming(2).size(), 1u);
    EXPECT_EQ(g.incoming(2)[0].level, 1);
    g.remove_edge(0, 2);
    EXPECT_TRUE(g.incoming(2).empty());
}

TEST(CoreGraph, SetLevelToSameLevelChangesNothing) {
    DynGraph g(10);
    g.set_level(0, 1);
    g.add_arc(0, 1);
    const WorkCounters before = g.counters();
    g.set_level(0, 1);
    EXPECT_EQ(g.counters().work, before.work);
    EXPECT_EQ(out_ids(g, 0), std::vector<VertexId>{1});
}

TEST(CoreGraph, SetLevelDownFlipsHigherOutNeighbors) {
    // v@2 with out = {a@0, b@2}; dropping to -1 flips both arcs.
    const VertexId v = 0, a = 1, b = 2;
    DynGraph g(10);
    g.set_level(a, 0);
    g.set_level(b, 2);
    g.set_level(v, 2);
    g.add_arc(v, a);
    g.add_arc(v, b);
    g.set_level(v, -1);
    EXPECT_TRUE(g.out(v).empty());
    EXPECT_EQ(out_ids(g, a), std::vector<VertexId>{v});
    EXPECT_EQ(out_ids(g, b), std::vector<VertexId>{v});
    EXPECT_EQ(incoming_ids(g, v, 0), std::vector<VertexId>{a});
    EXPECT_EQ(incoming_ids(g, v, 2), std::vector<VertexId>{b});
    EXPECT_EQ(g.counters().flips, 2u);
    EXPECT_TRUE(structural_violations(g).empty()) << testing::describe(structural_violations(g));
}

TEST(CoreGraph, SetLevelDownKeepsLowerOutNeighbors) {
    DynGraph g(10);
    g.set_level(1, 0);
    g.set_level(2, 1);
    g.set_level(0, 2);
    g.add_arc(0, 1);
    g.add_arc(0, 2);
    g.set_level(0, 1);
    EXPECT_EQ(out_ids(g, 0), (std::vector<VertexId>{1, 2}));
    EXPECT_EQ(incoming_ids(g, 1, 1), std::vector<VertexId>{0});
    EXPECT_EQ(incoming_ids(g, 2, 1), std::vector<VertexId>{0});
    EXPECT_EQ(g.counters().flips, 0u);
    EXPECT_TRUE(structural_violations(g).empty());
}

TEST(CoreGraph, SetLevelUpFlipsLowerIncoming) {
    // v@0 with incoming[0] = {c}, incoming[2] = {d}; rising to 2 takes c.
    const VertexId v = 0, c = 1, d = 2;
    DynGraph g(10);
    g.set_level(v, 0);
    g.set_level(c, 0);
    g.set_level(d, 2);
    g.add_arc(c, v);
    g.add_arc(d, v);
    g.set_level(v, 2);
    EXPECT_EQ(out_ids(g, v), std::vector<VertexId>{c});
    EXPECT_EQ(incoming_ids(g, c, 2), std::vector<VertexId>{v});
    EXPECT_EQ(incoming_ids(g, v, 2), std::vector<VertexId>{d});
    EXPECT_EQ(out_ids(g, d), std::vector<VertexId>{v});
    EXPECT_EQ(g.counters().flips, 1u);
    EXPECT_TRUE(structural_violations(g).empty()) << testing::describe(structural_violations(g));
}

TEST(CoreGraph, SetLevelRejectsOutOfRange) {
    DynGraph g(10);
    EXPECT_THROW(g.set_level(0, 3), std::invalid_argument);
    EXPECT_THROW(g.set_level(0, -2), std::invalid_argument);
    DynGraph capped(10, 1);
    EXPECT_THROW(capped.set_level(0, 2), std::invalid_argument);
}

TEST(CoreGraph, PhiExamples) {
    // v@1 with out = {a@0, b@1} and incoming[2] = {c}.
    DynGraph g(10);
    g.set_level(1, 0);
    g.set_level(2, 1);
    g.set_level(3, 2);
    g.set_level(0, 1);
    g.add_arc(0, 1);
    g.add_arc(0, 2);
    g.add_arc(3, 0);
    EXPECT_EQ(g.phi(0, 2), 2u);
    EXPECT_EQ(g.phi(0, 3), 3u);
    EXPECT_THROW(g.phi(0, 1), std::invalid_argument);

    DynGraph iso(10);
    for (Level l = 0; l <= 3; ++l) EXPECT_EQ(iso.phi(0, l), 0u);
}

TEST(CoreGraph, PhiOfWideLevelZeroStar) {
    DynGraph g(28);
    g.set_level(0, 0);
    for (VertexId w = 1; w <= 27; ++w) {
        g.set_level(w, 0);
        g.add_arc(0, w);
    }
    for (Level l = 1; l <= 4; ++l) EXPECT_EQ(g.phi(0, l), 27u);
}

// Random store state obeying the orientation rule. Levels start at 0: two
// adjacent level -1 vertices would already break the matching invariants.
DynGraph random_state(std::mt19937_64& rng, VertexId n, double density) {
    DynGraph g(n);
    const Level top = g.level_limit();
    std::uniform_int_distribution<Level> lvl(0, top);
    for (VertexId v = 0; v < n; ++v) g.set_level(v, lvl(rng));
    std::bernoulli_distribution coin(density), tie(0.5);
    for (VertexId a = 0; a < n; ++a) {
        for (VertexId b = a + 1; b < n; ++b) {
            if (!coin(rng)) continue;
            const Level la = g.level(a), lb = g.level(b);
            if (la > lb || (la == lb && tie(rng))) {
                g.add_arc(a, b);
            } else {
                g.add_arc(b, a);
            }
        }
    }
    return g;
}

TEST(CoreGraphProperty, PhiEqualsBruteForceCount) {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 60; ++round) {
        const VertexId n = 2 + static_cast<VertexId>(rng() % 29);
        const DynGraph g = random_state(rng, n, 0.3);
        for (VertexId v = 0; v < n; ++v) {
            for (Level l = g.level(v) + 1; l <= g.level_limit() + 1; ++l) {
                std::size_t count = 0;
                for (VertexId w = 0; w < n; ++w) {
                    if (w != v && g.has_edge(v, w) && g.level(w) < l) ++count;
                }
                ASSERT_EQ(g.phi(v, l), count) << "n=" << n << " v=" << v << " l=" << l;
            }
        }
    }
}

TEST(CoreGraphProperty, SetLevelRoundTripPreservesStructure) {
    std::mt19937_64 rng(12);
    for (int round = 0; round < 60; ++round) {
        const VertexId n = 2 + static_cast<VertexId>(rng() % 29);
        DynGraph g = random_state(rng, n, 0.25);
        std::set<std::pair<VertexId, VertexId>> edges;
        for (VertexId a = 0; a < n; ++a) {
            for (VertexId b = a + 1; b < n; ++b) {
                if (g.has_edge(a, b)) edges.emplace(a, b);
            }
        }
        std::uniform_int_distribution<Level> lvl(0, g.level_limit());
        for (int step = 0; step < 40; ++step) {
            const auto v = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
            const Level old = g.level(v);
            g.set_level(v, lvl(rng));
            ASSERT_TRUE(structural_violations(g).empty()) << testing::describe(structural_violations(g));
            g.set_level(v, old);
            ASSERT_TRUE(structural_violations(g).empty()) << testing::describe(structural_violations(g));
        }
        for (VertexId a = 0; a < n; ++a) {
            for (VertexId b = a + 1; b < n; ++b) {
                ASSERT_EQ(g.has_edge(a, b), edges.count({a, b}) == 1);
            }
        }
        ASSERT_EQ(g.num_edges(), edges.size());
        ASSERT_EQ(g.space_usage().list_entries(), 2 * edges.size());
    }
}

TEST(CoreGraphProperty, RandomAddRemoveKeepsCrossReferences) {
    std::mt19937_64 rng(13);
    DynGraph g = random_state(rng, 30, 0.2);
    for (int step = 0; step < 2000; ++step) {
        const auto a = static_cast<VertexId>(rng() % 30);
        const auto b = static_cast<VertexId>(rng() % 30);
        if (a == b) continue;
        if (g.has_edge(a, b)) {
            g.remove_edge(a, b);
        } else if (g.level(a) >= g.level(b)) {
            g.add_arc(a, b);
        } else {
            g.add_arc(b, a);
        }
        if (step % 50 == 0) {
            ASSERT_TRUE(structural_violations(g).empty());
        }
    }
    EXPECT_TRUE(structural_violations(g).empty());
}

TEST(CoreGraph, RandomOutNeighbor) {
    DynGraph g(12);
    g.add_arc(0, 1);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(g.random_out_neighbor(0, rng), 1);
    EXPECT_THROW(g.random_out_neighbor(2, rng), std::invalid_argument);

    for (VertexId w = 2; w <= 10; ++w) g.add_arc(0, w);
    std::mt19937_64 r1(99), r2(99);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(g.random_out_neighbor(0, r1), g.random_out_neighbor(0, r2));
}

TEST(CoreGraph, RandomOutNeighborIsUniform) {
    DynGraph g(12);
    for (VertexId w = 1; w <= 10; ++w) g.add_arc(0, w);
    std::mt19937_64 rng(2024);
    std::vector<int> hits(12, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++hits[g.random_out_neighbor(0, rng)];
    for (VertexId w = 1; w <= 10; ++w) {
        const double f = static_cast<double>(hits[w]) / draws;
        EXPECT_GE(f, 0.08) << w;
        EXPECT_LE(f, 0.12) << w;
    }
}

TEST(CoreGraph, ConsistencyCheckFlagsFreeNeighbors) {
    DynGraph g(5);
    g.add_arc(0, 1);  // two free endpoints
    const auto vs = g.consistency_check();
    EXPECT_TRUE(testing::has_kind(vs, ViolationKind::kMaximality));
}

TEST(CoreGraph, ConsistencyCheckFlagsBrokenMutualReference) {
    DynGraph g(5);
    g.set_level(0, 0);
    g.set_level(1, 0);
    g.add_arc(0, 1);
    g.set_mates(0, 1);
    ASSERT_TRUE(g.consistency_check().empty());
    g.corrupt_incoming_for_testing(1, 0);
    EXPECT_TRUE(testing::has_kind(g.consistency_check(), ViolationKind::kMutualConsistency));
}

TEST(CoreGraph, ConsistencyCheckFlagsMatchingShapes) {
    DynGraph g(6);
    g.set_level(0, 0);
    g.set_level(1, 1);
    g.add_arc(1, 0);
    g.set_mates(0, 1);
    EXPECT_TRUE(testing::has_kind(g.consistency_check(), ViolationKind::kMatchedLevel));

    DynGraph h(6);
    h.set_level(3, 0);
    EXPECT_TRUE(testing::has_kind(h.consistency_check(), ViolationKind::kFreeNormalForm));
    h.set_temporarily_free(3, true);
    EXPECT_TRUE(testing::has_kind(h.consistency_check(), ViolationKind::kTemporarilyFree));
}

TEST(CoreGraph, MatesAreSymmetricAndCounted) {
    DynGraph g(4);
    g.set_level(0, 0);
    g.set_level(1, 0);
    g.add_arc(0, 1);
    g.set_mates(0, 1);
    EXPECT_EQ(g.mate(1), 0);
    EXPECT_EQ(g.matched_edge_count(), 1u);
    EXPECT_THROW(g.set_mates(0, 2), std::invalid_argument);
    EXPECT_THROW(g.clear_mates(0, 2), std::invalid_argument);
    g.clear_mates(1, 0);
    EXPECT_EQ(g.matched_edge_count(), 0u);
}

TEST(CoreGraph, SpaceIsLinearInEdges) {
    std::mt19937_64 rng(5);
    const DynGraph g = random_state(rng, 30, 0.4);
    const SpaceUsage s = g.space_usage();
    EXPECT_EQ(s.list_entries(), 2 * g.num_edges());
    EXPECT_LE(s.buckets, g.num_edges());
}

}  // namespace
}  // namespace dynmatch
