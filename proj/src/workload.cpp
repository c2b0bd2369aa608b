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

#include "dynmatch/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "dynmatch/random.hpp"

namespace dynmatch {

TraceError::TraceError(const std::string& what, std::size_t line)
    : std::invalid_argument(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::uint64_t pair_count(VertexId n) {
    const auto m = static_cast<std::uint64_t>(n);
    return m * (m - 1) / 2;
}

// Present edges with O(1) insert, erase and uniform pick.
class EdgePool {
public:
    bool contains(VertexId a, VertexId b) const { return pos_.count(edge_key(a, b)) != 0; }
    std::size_t size() const { return edges_.size(); }

    void insert(VertexId a, VertexId b) {
        pos_.emplace(edge_key(a, b), edges_.size());
        edges_.emplace_back(a, b);
    }
    void erase(VertexId a, VertexId b) {
        auto it = pos_.find(edge_key(a, b));
        const std::size_t p = it->second;
        pos_.erase(it);
        if (p + 1 != edges_.size()) {
            edges_[p] = edges_.back();
            pos_[edge_key(edges_[p].u, edges_[p].v)] = p;
        }
        edges_.pop_back();
    }
    template <class Rng>
    Edge pick(Rng& rng) const {
        return edges_[rnd::uniform_index(rng, edges_.size())];
    }

private:
    std::vector<Edge> edges_;
    std::unordered_map<std::uint64_t, std::size_t> pos_;
};

// Uniform absent pair, in random endpoint order.
template <class Rng>
std::pair<VertexId, VertexId> random_absent_pair(const EdgePool& pool, VertexId n, Rng& rng) {
    const std::uint64_t total = pair_count(n);
    if (pool.size() * 2 <= total) {
        for (;;) {
            const auto u = static_cast<VertexId>(rnd::uniform_index(rng, static_cast<std::uint64_t>(n)));
            auto v = static_cast<VertexId>(rnd::uniform_index(rng, static_cast<std::uint64_t>(n) - 1));
            if (v >= u) ++v;
            if (!pool.contains(u, v)) return {u, v};
        }
    }
    std::vector<std::pair<VertexId, VertexId>> absent;
    for (VertexId u = 0; u < n; ++u) {
        for (VertexId v = u + 1; v < n; ++v) {
            if (!pool.contains(u, v)) absent.emplace_back(u, v);
        }
    }
    auto p = absent[rnd::uniform_index(rng, absent.size())];
    if (rnd::bernoulli(rng, 0.5)) std::swap(p.first, p.second);
    return p;
}

void check_common(VertexId n, std::int64_t t) {
    if (n < 1) throw std::invalid_argument("vertex count must be at least 1");
    if (t < 0) throw std::invalid_argument("trace length must be non-negative");
    if (n < 2 && t > 0) throw std::invalid_argument("a non-empty trace needs at least two vertices");
}

}  // namespace

Trace gen_random(VertexId n, std::int64_t t, double p_delete, std::uint64_t seed) {
    check_common(n, t);
    if (!(p_delete >= 0.0 && p_delete < 1.0)) {
        throw std::invalid_argument("p_delete must lie in [0, 1)");
    }
    std::mt19937_64 rng(seed);
    Trace tr;
    tr.n = n;
    tr.events.reserve(static_cast<std::size_t>(t));
    EdgePool pool;
    const std::uint64_t total = pair_count(n);
    for (std::int64_t i = 0; i < t; ++i) {
        const bool want_delete = pool.size() > 0 && rnd::bernoulli(rng, p_delete);
        if (want_delete || pool.size() == total) {
            const Edge e = pool.pick(rng);
            pool.erase(e.u, e.v);
            tr.events.push_back({UpdateOp::kDelete, e.u, e.v});
        } else {
            const auto [u, v] = random_absent_pair(pool, n, rng);
            pool.insert(u, v);
            tr.events.push_back({UpdateOp::kInsert, u, v});
        }
    }
    return tr;
}

Trace gen_sliding_window(VertexId n, std::int64_t t, std::int64_t window, std::uint64_t seed) {
    check_common(n, t);
    if (window < 1) throw std::invalid_argument("window must be at least 1");
    if (t > 0 && static_cast<std::uint64_t>(window) > pair_count(n)) {
        throw std::invalid_argument("window exceeds the number of vertex pairs");
    }
    std::mt19937_64 rng(seed);
    Trace tr;
    tr.n = n;
    tr.events.reserve(static_cast<std::size_t>(t));
    EdgePool pool;
    struct Pending {
        std::int64_t due;
        VertexId u, v;
    };
    std::deque<Pending> queue;
    for (std::int64_t i = 0; i < t; ++i) {
        if (!queue.empty() && queue.front().due == i) {
            const Pending p = queue.front();
            queue.pop_front();
            pool.erase(p.u, p.v);
            tr.events.push_back({UpdateOp::kDelete, p.u, p.v});
        } else {
            const auto [u, v] = random_absent_pair(pool, n, rng);
            pool.insert(u, v);
            queue.push_back({i + window, u, v});
            tr.events.push_back({UpdateOp::kInsert, u, v});
        }
    }
    return tr;
}

Trace gen_skew_star(VertexId n, std::int64_t t, double hub_fraction, std::uint64_t seed) {
    check_common(n, t);
    if (!(hub_fraction >= 0.0 && hub_fraction < 0.5)) {
        throw std::invalid_argument("hub_fraction must lie in [0, 0.5)");
    }
    const auto hubs = std::max<VertexId>(1, static_cast<VertexId>(std::floor(hub_fraction * n)));
    if (n < 2 * hubs + 2) throw std::invalid_argument("skew_star needs n >= 2 * hubs + 2");
    std::mt19937_64 rng(seed);

    std::vector<VertexId> perm(static_cast<std::size_t>(n));
    for (VertexId i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = perm.size(); i > 1; --i) {
        std::swap(perm[i - 1], perm[rnd::uniform_index(rng, i)]);
    }
    const std::vector<VertexId> hub(perm.begin(), perm.begin() + hubs);
    const std::vector<VertexId> anchor(perm.begin() + hubs, perm.begin() + 2 * hubs);
    const std::vector<VertexId> leaf(perm.begin() + 2 * hubs, perm.end());
    const std::size_t pairs = leaf.size() / 2;

    Trace tr;
    tr.n = n;
    const auto limit = static_cast<std::size_t>(t);
    tr.events.reserve(limit);
    auto emit = [&](UpdateOp op, VertexId u, VertexId v) {
        if (tr.events.size() < limit) tr.events.push_back({op, u, v});
    };

    for (std::size_t i = 0; i < pairs; ++i) emit(UpdateOp::kInsert, leaf[2 * i], leaf[2 * i + 1]);
    for (VertexId j = 0; j < hubs; ++j) emit(UpdateOp::kInsert, hub[j], anchor[j]);
    std::vector<VertexId> hub_of(leaf.size());
    for (std::size_t i = 0; i < leaf.size(); ++i) {
        hub_of[i] = hub[rnd::uniform_index(rng, hub.size())];
        emit(UpdateOp::kInsert, hub_of[i], leaf[i]);
    }

    // Churn: one deletion immediately undone by the matching insertion.
    while (tr.events.size() < limit) {
        const double r = rnd::unit(rng);
        if (r < 1.0 / 256.0) {
            const auto j = rnd::uniform_index(rng, hub.size());
            emit(UpdateOp::kDelete, hub[j], anchor[j]);
            emit(UpdateOp::kInsert, hub[j], anchor[j]);
        } else if (r < 0.5 && pairs > 0) {
            const auto i = rnd::uniform_index(rng, pairs);
            emit(UpdateOp::kDelete, leaf[2 * i], leaf[2 * i + 1]);
            emit(UpdateOp::kInsert, leaf[2 * i], leaf[2 * i + 1]);
        } else {
            const auto i = rnd::uniform_index(rng, leaf.size());
            emit(UpdateOp::kDelete, hub_of[i], leaf[i]);
            hub_of[i] = hub[rnd::uniform_index(rng, hub.size())];
            emit(UpdateOp::kInsert, hub_of[i], leaf[i]);
        }
    }
    return tr;
}

namespace {

// Replays the trace; returns the set of present edges or throws TraceError.
EdgePool replay(const Trace& trace) {
    if (trace.n < 1) throw TraceError("vertex count must be at least 1");
    EdgePool pool;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const UpdateEvent& e = trace.events[i];
        const std::size_t line = i + 2;
        if (e.u < 0 || e.u >= trace.n || e.v < 0 || e.v >= trace.n) {
            throw TraceError("vertex id out of range [0, " + std::to_string(trace.n) + ")", line);
        }
        if (e.u == e.v) throw TraceError("self-loop on vertex " + std::to_string(e.u), line);
        const bool present = pool.contains(e.u, e.v);
        if (e.op == UpdateOp::kInsert) {
            if (present) throw TraceError("insert of an edge that is already present", line);
            pool.insert(e.u, e.v);
        } else {
            if (!present) throw TraceError("delete of an edge that is not present", line);
            pool.erase(e.u, e.v);
        }
    }
    return pool;
}

}  // namespace

void validate(const Trace& trace) { replay(trace); }

std::vector<Edge> live_edges_after(const Trace& trace) {
    replay(trace);
    std::vector<Edge> out;
    std::unordered_map<std::uint64_t, bool> alive;
    for (const UpdateEvent& e : trace.events) alive[edge_key(e.u, e.v)] = e.op == UpdateOp::kInsert;
    for (const auto& [key, on] : alive) {
        if (on) out.emplace_back(static_cast<VertexId>(key >> 32), static_cast<VertexId>(key & 0xffffffffu));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Trace append_teardown(const Trace& trace) {
    Trace out = trace;
    for (const Edge& e : live_edges_after(trace)) out.events.push_back({UpdateOp::kDelete, e.u, e.v});
    return out;
}

std::string encode(const Trace& trace) {
    std::string s;
    s.reserve(trace.events.size() * 14 + 32);
    s += "n=" + std::to_string(trace.n) + " t=" + std::to_string(trace.events.size());
    if (trace.seed) s += " seed=" + std::to_string(*trace.seed);
    s += '\n';
    for (const UpdateEvent& e : trace.events) {
        s += e.op == UpdateOp::kInsert ? "+ " : "- ";
        s += std::to_string(e.u);
        s += ' ';
        s += std::to_string(e.v);
        s += '\n';
    }
    return s;
}

namespace {

template <class Int>
bool parse_int(std::string_view text, Int& out) {
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

template <class Int>
Int header_field(std::string_view token, std::string_view key) {
    Int value{};
    if (token.substr(0, key.size()) != key || !parse_int(token.substr(key.size()), value)) {
        throw TraceError("malformed header field '" + std::string(token) + "', expected " +
                             std::string(key) + "<int>",
                         1);
    }
    return value;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t sp = line.find(' ', start);
        parts.push_back(line.substr(start, sp == std::string_view::npos ? sp : sp - start));
        if (sp == std::string_view::npos) break;
        start = sp + 1;
    }
    return parts;
}

}  // namespace

Trace decode(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        const std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    if (lines.empty()) throw TraceError("empty trace: missing header", 1);

    const auto header = split_spaces(lines[0]);
    if (header.size() != 2 && header.size() != 3) {
        throw TraceError("header must be 'n=<int> t=<int>' with an optional ' seed=<int>'", 1);
    }
    Trace tr;
    tr.n = header_field<VertexId>(header[0], "n=");
    const auto t = header_field<std::int64_t>(header[1], "t=");
    if (header.size() == 3) tr.seed = header_field<std::uint64_t>(header[2], "seed=");
    if (tr.n < 1) throw TraceError("vertex count must be at least 1", 1);
    if (t < 0) throw TraceError("trace length must be non-negative", 1);

    const std::size_t body = lines.size() - 1;
    if (body != static_cast<std::uint64_t>(t)) {
        const std::size_t line = body > static_cast<std::uint64_t>(t) ? static_cast<std::size_t>(t) + 2 : lines.size() + 1;
        throw TraceError("header declares t=" + std::to_string(t) + " but the body has " +
                             std::to_string(body) + " lines",
                         line);
    }
    tr.events.reserve(body);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto parts = split_spaces(lines[i]);
        UpdateEvent e;
        if (parts.size() != 3 || (parts[0] != "+" && parts[0] != "-") || !parse_int(parts[1], e.u) ||
            !parse_int(parts[2], e.v)) {
            throw TraceError("expected '+ <u> <v>' or '- <u> <v>', got '" + std::string(lines[i]) + "'", i + 1);
        }
        e.op = parts[0] == "+" ? UpdateOp::kInsert : UpdateOp::kDelete;
        tr.events.push_back(e);
    }
    validate(tr);
    return tr;
}

Trace read_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TraceError("cannot open trace file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode(buf.str());
}

void write_trace_file(const std::filesystem::path& path, const Trace& trace) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write trace file " + path.string());
    out << encode(trace);
    if (!out) throw std::runtime_error("failed writing trace file " + path.string());
}

}  // namespace dynmatch
