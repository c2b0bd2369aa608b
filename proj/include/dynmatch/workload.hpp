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

#ifndef DYNMATCH_WORKLOAD_HPP_
#define DYNMATCH_WORKLOAD_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dynmatch/types.hpp"

namespace dynmatch {

/// An update sequence over n vertices, starting from the empty graph.
struct Trace {
    VertexId n = 1;
    std::vector<UpdateEvent> events;
    std::optional<std::uint64_t> seed;

    std::size_t size() const { return events.size(); }
    friend bool operator==(const Trace&, const Trace&) = default;
};

/// Malformed or inapplicable trace. `line()` is 1-based, 0 when not tied to
/// a line of a trace file.
class TraceError : public std::invalid_argument {
public:
    TraceError(const std::string& what, std::size_t line = 0);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Each step deletes a uniformly random present edge with probability
/// p_delete (when one exists), otherwise inserts a uniformly random absent
/// pair. When every pair is present the step deletes.
Trace gen_random(VertexId n, std::int64_t t, double p_delete, std::uint64_t seed);

/// Random insertions; each inserted edge is deleted exactly `window` steps
/// after its insertion.
Trace gen_sliding_window(VertexId n, std::int64_t t, std::int64_t window, std::uint64_t seed);

/// Hub-heavy workload. max(1, floor(hub_fraction * n)) hubs each get a
/// private anchor neighbor, the remaining vertices are paired up and every one
/// of them is attached to a random hub. The rest of the trace is churn: an
/// edge is deleted and immediately re-inserted, mostly leaf pairs and
/// hub-leaf edges, occasionally a hub-anchor edge.
Trace gen_skew_star(VertexId n, std::int64_t t, double hub_fraction, std::uint64_t seed);

/// Appends deletions of every edge still present after the trace, in
/// lexicographic (min endpoint, max endpoint) order.
Trace append_teardown(const Trace& trace);

/// Throws TraceError naming the offending event (1-based index + 1, i.e. its
/// line in the file format) if replaying from the empty graph would insert a
/// present edge, delete an absent one, or use a bad vertex id.
void validate(const Trace& trace);

/// Edges present after replaying the whole trace, sorted.
std::vector<Edge> live_edges_after(const Trace& trace);

std::string encode(const Trace& trace);
Trace decode(std::string_view text);

Trace read_trace_file(const std::filesystem::path& path);
void write_trace_file(const std::filesystem::path& path, const Trace& trace);

}  // namespace dynmatch

#endif  // DYNMATCH_WORKLOAD_HPP_
