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

#ifndef DYNMATCH_CLI_HPP_
#define DYNMATCH_CLI_HPP_

#include <ostream>
#include <string>

namespace dynmatch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the directory that relative --report paths
/// resolve against.
inline constexpr const char* kReportDirEnv = "DYNMATCH_REPORT_DIR";

/// The `dynmatch` tool: gen, run, verify, bench, stats.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// A report with every wall-clock field removed.
std::string strip_timing(const std::string& report, bool json);

}  // namespace dynmatch::cli

#endif  // DYNMATCH_CLI_HPP_
