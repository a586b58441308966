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
#include <string_view>
#include <vector>

#include "fedowen/error.hpp"
#include "fedowen/simulator.hpp"

namespace fedowen {

struct ConfigIssue {
  int line = 0;  // 1-based; 0 when the key was not in the document
  std::string key;
  std::string message;
};

/// Carries every problem found in a config document, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Parses a flat `key = value` document.
///
/// Values are integers, reals, true/false, "quoted" or bare strings, and
/// `[a, b, ...]` lists (seeds only). `#` starts a comment. Unknown keys,
/// duplicates, type errors and out-of-range values are all reported, each
/// with its line number. Missing keys keep their defaults.
ExperimentConfig parse_config(std::string_view text);

/// parse_config on a file's contents. Throws Error if it cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config: parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

/// Range and consistency checks. Empty when the config is valid.
std::vector<ConfigIssue> check_config(const ExperimentConfig& cfg);

/// Throws ConfigError when check_config reports anything.
void validate_config(const ExperimentConfig& cfg);

/// Sets one key from its textual value (used by sweeps). Throws ConfigError.
void set_config_value(ExperimentConfig& cfg, std::string_view key,
                      std::string_view value);

/// Keys parse_config understands, in serialization order.
std::vector<std::string> config_keys();

}  // namespace fedowen
