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

#include "fedowen/results.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fedowen/config.hpp"
#include "fedowen/error.hpp"

namespace fedowen {

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

namespace {

template <typename T, typename Fmt>
std::string joined(const std::vector<T>& items, Fmt fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ';';
    out += fmt(items[i]);
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << body;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace

std::string round_csv(const RunResult& run, int n_clients) {
  std::ostringstream os;
  os << "round,selected_ids";
  for (int i = 0; i < n_clients; ++i) os << ",phi_" << i;
  os << ",alpha,eval_accuracy,utility_calls\n";
  for (const auto& r : run.rounds) {
    os << r.round << ','
       << joined(r.selected, [](int v) { return std::to_string(v); });
    for (int i = 0; i < n_clients; ++i) {
      os << ','
         << (static_cast<std::size_t>(i) < r.phi.size()
                 ? format_real(r.phi[static_cast<std::size_t>(i)])
                 : std::string("0"));
    }
    os << ',' << joined(r.alpha, format_real) << ','
       << format_real(r.eval_accuracy) << ',' << r.utility_calls << '\n';
  }
  return os.str();
}

std::string summary_json(const ExperimentReport& report) {
  nlohmann::ordered_json config;
  {
    const std::string text = serialize_config(report.config);
    std::istringstream lines(text);
    std::string line;
    // Echo the config as the same key = value pairs the parser reads.
    while (std::getline(lines, line)) {
      const auto eq = line.find(" = ");
      const std::string value = line.substr(eq + 3);
      // Rendered values are JSON literals; keep anything else as text.
      auto parsed = nlohmann::ordered_json::parse(value, nullptr, false);
      config[line.substr(0, eq)] =
          parsed.is_discarded() ? nlohmann::ordered_json(value) : std::move(parsed);
    }
  }
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const auto& run : report.runs) {
    runs.push_back({{"seed", run.seed},
                    {"rounds", run.rounds.size()},
                    {"initial_accuracy", run.initial_accuracy},
                    {"final_accuracy", run.final_accuracy}});
  }
  nlohmann::ordered_json doc;
  doc["config"] = std::move(config);
  doc["rounds"] = report.config.rounds;
  doc["runs"] = std::move(runs);
  doc["mean_final_accuracy"] = report.mean_final_accuracy;
  doc["std_final_accuracy"] = report.std_final_accuracy;
  return doc.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_results(
    const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error("cannot create output directory '" + dir.string() +
                "': " + ec.message());
  }
  std::vector<std::filesystem::path> written;
  for (const auto& run : report.runs) {
    auto path = dir / ("rounds_seed" + std::to_string(run.seed) + ".csv");
    write_file(path, round_csv(run, report.config.n_clients));
    written.push_back(std::move(path));
  }
  auto summary = dir / "summary.json";
  write_file(summary, summary_json(report));
  written.push_back(std::move(summary));
  return written;
}

}  // namespace fedowen
