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

#ifndef DYNMATCH_TESTS_TEST_SUPPORT_HPP_
#define DYNMATCH_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include "dynmatch/dyn_graph.hpp"

namespace dynmatch::testing {

inline bool is_structural(ViolationKind k) {
    switch (k) {
        case ViolationKind::kOrientation:
        case ViolationKind::kMutualConsistency:
        case ViolationKind::kCrossRef:
        case ViolationKind::kBucketKey:
        case ViolationKind::kEmptyBucket:
        case ViolationKind::kLevelRange:
        case ViolationKind::kSpace:
            return true;
        default:
            return false;
    }
}

/// Violations of the adjacency-store invariants only, ignoring the matching.
inline std::vector<Violation> structural_violations(const DynGraph& g) {
    std::vector<Violation> out;
    for (Violation& v : g.consistency_check()) {
        if (is_structural(v.kind)) out.push_back(std::move(v));
    }
    return out;
}

inline bool has_kind(const std::vector<Violation>& vs, ViolationKind k) {
    return std::any_of(vs.begin(), vs.end(), [k](const Violation& v) { return v.kind == k; });
}

inline std::string describe(const std::vector<Violation>& vs) {
    std::string s;
    for (const Violation& v : vs) s += to_string(v.kind) + ": " + v.detail + "\n";
    return s;
}

inline std::vector<VertexId> out_ids(const DynGraph& g, VertexId v) {
    std::vector<VertexId> ids;
    for (const Slot& s : g.out(v)) ids.push_back(s.other);
    std::sort(ids.begin(), ids.end());
    return ids;
}

inline std::vector<VertexId> incoming_ids(const DynGraph& g, VertexId v, Level l) {
    std::vector<VertexId> ids;
    for (const Bucket& b : g.incoming(v)) {
        if (b.level != l) continue;
        for (const Slot& s : b.items) ids.push_back(s.other);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace dynmatch::testing

#endif  // DYNMATCH_TESTS_TEST_SUPPORT_HPP_
