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

#ifndef DYNMATCH_TYPES_HPP_
#define DYNMATCH_TYPES_HPP_

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace dynmatch {

using VertexId = std::int32_t;
using Level = std::int32_t;
using EdgeId = std::uint32_t;

inline constexpr VertexId kNoVertex = -1;
inline constexpr Level kFreeLevel = -1;

/// Undirected edge, normalized so that u < v.
struct Edge {
    VertexId u = kNoVertex;
    VertexId v = kNoVertex;

    Edge() = default;
    Edge(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::uint64_t edge_key(VertexId a, VertexId b) {
    const auto lo = static_cast<std::uint64_t>(static_cast<std::uint32_t>(a < b ? a : b));
    const auto hi = static_cast<std::uint64_t>(static_cast<std::uint32_t>(a < b ? b : a));
    return (lo << 32) | hi;
}

enum class UpdateOp : std::uint8_t { kInsert, kDelete };

/// One element of an update sequence.
struct UpdateEvent {
    UpdateOp op = UpdateOp::kInsert;
    VertexId u = 0;
    VertexId v = 0;

    friend bool operator==(const UpdateEvent&, const UpdateEvent&) = default;
};

/// Raised when an internal algorithmic invariant is observed to fail.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Saturating 3^k for k >= 0.
inline std::uint64_t pow3(int k) {
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) {
        if (r > std::numeric_limits<std::uint64_t>::max() / 3) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        r *= 3;
    }
    return r;
}

/// floor(log3(x)) for x >= 1; 0 for x <= 1.
inline Level floor_log3(std::uint64_t x) {
    Level l = 0;
    while (x >= 3) {
        x /= 3;
        ++l;
    }
    return l;
}

/// Default level ceiling for an n-vertex graph: max(0, floor(log3(n - 1))).
inline Level max_level_for(VertexId n) {
    return n <= 2 ? 0 : floor_log3(static_cast<std::uint64_t>(n) - 1);
}

}  // namespace dynmatch

#endif  // DYNMATCH_TYPES_HPP_
