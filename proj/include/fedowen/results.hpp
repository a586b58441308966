// Copyright 2026 The FedOwen Authors.
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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fedowen/simulator.hpp"

namespace fedowen {

/// Per-round CSV: round, selected_ids, phi_0..phi_{n-1}, alpha,
/// eval_accuracy, utility_calls. Lists inside a cell are ';'-separated and
/// reals use the shortest round-trip form, so equal runs give equal bytes.
std::string round_csv(const RunResult& run, int n_clients);

/// Summary JSON: config echo, per-seed initial/final accuracy, mean, std.
std::string summary_json(const ExperimentReport& report);

/// Writes rounds_seed<seed>.csv per run plus summary.json into `dir`
/// (created if needed). Returns the paths written.
std::vector<std::filesystem::path> write_results(
    const ExperimentReport& report, const std::filesystem::path& dir);

/// Shortest decimal that parses back to the same double.
std::string format_real(double x);

}  // namespace fedowen
