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

#include "dynmatch/metrics.hpp"

#include <cstdio>
#include <sstream>

namespace dynmatch {

std::string format_ratio(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

nlohmann::json to_json(const MetricsReport& m) {
    nlohmann::json levels = nlohmann::json::array();
    for (const LevelMetrics& l : m.levels) {
        levels.push_back({{"level", l.level},
                          {"created", l.created},
                          {"terminated", l.terminated},
                          {"natural", l.natural},
                          {"induced", l.induced},
                          {"charged_work", l.charged_work},
                          {"max_charged_ratio", l.max_charged_ratio},
                          {"max_rollup_ratio", l.max_rollup_ratio}});
    }
    return {
        {"updates", m.updates},
        {"inserts", m.inserts},
        {"deletes", m.deletes},
        {"matched_deletes", m.matched_deletes},
        {"work", m.work},
        {"mutations", m.mutations},
        {"bucket_reads", m.bucket_reads},
        {"scans", m.scans},
        {"flips", m.flips},
        {"work_per_update", m.work_per_update},
        {"scans_per_update", m.scans_per_update},
        {"flips_per_update", m.flips_per_update},
        {"overhead_work", m.overhead_work},
        {"epoch_work", m.epoch_work},
        {"pending_work", m.pending_work},
        {"epochs_created", m.epochs_created},
        {"epochs_terminated", m.epochs_terminated},
        {"epochs_natural", m.epochs_natural},
        {"epochs_induced", m.epochs_induced},
        {"epochs_alive", m.epochs_alive},
        {"max_charged_ratio", m.max_charged_ratio},
        {"max_rollup_ratio", m.max_rollup_ratio},
        {"deterministic_settles", m.deterministic_settles},
        {"random_settles", m.random_settles},
        {"cap_samples", m.cap_samples},
        {"rise_checks", m.rise_checks},
        {"max_recursion_depth", m.max_recursion_depth},
        {"max_level", m.max_level},
        {"level_limit", m.level_limit},
        {"induced_at_level_limit", m.induced_at_level_limit},
        {"matching_size", m.matching_size},
        {"live_edges", m.live_edges},
        {"levels", levels},
    };
}

std::string to_text(const MetricsReport& m) {
    std::ostringstream os;
    auto kv = [&os](const std::string& k, const auto& v) { os << k << '=' << v << '\n'; };
    kv("updates", m.updates);
    kv("inserts", m.inserts);
    kv("deletes", m.deletes);
    kv("matched_deletes", m.matched_deletes);
    kv("work", m.work);
    kv("mutations", m.mutations);
    kv("bucket_reads", m.bucket_reads);
    kv("scans", m.scans);
    kv("flips", m.flips);
    kv("work_per_update", format_ratio(m.work_per_update));
    kv("scans_per_update", format_ratio(m.scans_per_update));
    kv("flips_per_update", format_ratio(m.flips_per_update));
    kv("overhead_work", m.overhead_work);
    kv("epoch_work", m.epoch_work);
    kv("pending_work", m.pending_work);
    kv("epochs_created", m.epochs_created);
    kv("epochs_terminated", m.epochs_terminated);
    kv("epochs_natural", m.epochs_natural);
    kv("epochs_induced", m.epochs_induced);
    kv("epochs_alive", m.epochs_alive);
    kv("max_charged_ratio", format_ratio(m.max_charged_ratio));
    kv("max_rollup_ratio", format_ratio(m.max_rollup_ratio));
    kv("deterministic_settles", m.deterministic_settles);
    kv("random_settles", m.random_settles);
    kv("cap_samples", m.cap_samples);
    kv("rise_checks", m.rise_checks);
    kv("max_recursion_depth", m.max_recursion_depth);
    kv("max_level", m.max_level);
    kv("level_limit", m.level_limit);
    kv("induced_at_level_limit", m.induced_at_level_limit);
    kv("matching_size", m.matching_size);
    kv("live_edges", m.live_edges);
    for (const LevelMetrics& l : m.levels) {
        const std::string p = "level." + std::to_string(l.level) + ".";
        kv(p + "created", l.created);
        kv(p + "terminated", l.terminated);
        kv(p + "natural", l.natural);
        kv(p + "induced", l.induced);
        kv(p + "charged_work", l.charged_work);
        kv(p + "max_charged_ratio", format_ratio(l.max_charged_ratio));
        kv(p + "max_rollup_ratio", format_ratio(l.max_rollup_ratio));
    }
    return os.str();
}

}  // namespace dynmatch
