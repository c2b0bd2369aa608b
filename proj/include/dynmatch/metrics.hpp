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

#ifndef DYNMATCH_METRICS_HPP_
#define DYNMATCH_METRICS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynmatch/types.hpp"

namespace dynmatch {

struct LevelMetrics {
    Level level = 0;
    std::uint64_t created = 0;
    std::uint64_t terminated = 0;
    std::uint64_t natural = 0;
    std::uint64_t induced = 0;
    std::uint64_t charged_work = 0;
    /// Maxima over terminated epochs of this level, normalized by 3^level.
    double max_charged_ratio = 0.0;
    double max_rollup_ratio = 0.0;
};

struct MetricsReport {
    std::uint64_t updates = 0;
    std::uint64_t inserts = 0;
    std::uint64_t deletes = 0;
    std::uint64_t matched_deletes = 0;

    std::uint64_t work = 0;
    std::uint64_t mutations = 0;
    std::uint64_t bucket_reads = 0;
    std::uint64_t scans = 0;  // also the message-complexity proxy
    std::uint64_t flips = 0;
    double work_per_update = 0.0;
    double scans_per_update = 0.0;
    double flips_per_update = 0.0;

    std::uint64_t overhead_work = 0;
    std::uint64_t epoch_work = 0;
    std::uint64_t pending_work = 0;

    std::uint64_t epochs_created = 0;
    std::uint64_t epochs_terminated = 0;
    std::uint64_t epochs_natural = 0;
    std::uint64_t epochs_induced = 0;
    std::uint64_t epochs_alive = 0;
    double max_charged_ratio = 0.0;
    double max_rollup_ratio = 0.0;

    std::uint64_t deterministic_settles = 0;
    std::uint64_t random_settles = 0;
    std::uint64_t cap_samples = 0;
    std::uint64_t rise_checks = 0;
    std::uint64_t max_recursion_depth = 0;
    Level max_level = kFreeLevel;
    Level level_limit = 0;
    /// Induced terminations among epochs sitting at level_limit.
    std::uint64_t induced_at_level_limit = 0;

    std::uint64_t matching_size = 0;
    std::uint64_t live_edges = 0;

    std::vector<LevelMetrics> levels;
};

nlohmann::json to_json(const MetricsReport& m);
/// Line-oriented key=value block; per-level entries use `level.<l>.<field>`.
std::string to_text(const MetricsReport& m);

/// Fixed-precision rendering used by every text report.
std::string format_ratio(double x);

}  // namespace dynmatch

#endif  // DYNMATCH_METRICS_HPP_
