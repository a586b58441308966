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

#include "fedowen/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include "fedowen/aggregation.hpp"
#include "fedowen/estimators.hpp"
#include "fedowen/model.hpp"

namespace fedowen {

namespace {

using C = ExperimentConfig;
using Field = std::variant<int C::*, double C::*, bool C::*, std::string C::*,
                           std::vector<std::uint64_t> C::*>;

struct FieldDef {
  std::string_view key;
  Field field;
};

const std::vector<FieldDef>& fields() {
  static const std::vector<FieldDef> defs = {
      {"dataset", &C::dataset},
      {"idx_images", &C::idx_images},
      {"idx_labels", &C::idx_labels},
      {"classes", &C::classes},
      {"examples", &C::examples},
      {"feature_dim", &C::feature_dim},
      {"blob_separation", &C::blob_separation},
      {"eval_fraction", &C::eval_fraction},
      {"imbalance_factor", &C::imbalance_factor},
      {"dirichlet_alpha", &C::dirichlet_alpha},
      {"n_clients", &C::n_clients},
      {"clients_per_round", &C::clients_per_round},
      {"rounds", &C::rounds},
      {"estimator", &C::estimator},
      {"Q", &C::Q},
      {"M", &C::M},
      {"eta", &C::eta},
      {"owen_mode", &C::owen_mode},
      {"owen_grid", &C::owen_grid},
      {"gtg_eps", &C::gtg_eps},
      {"wshap_alpha", &C::wshap_alpha},
      {"wshap_beta", &C::wshap_beta},
      {"epsilon", &C::epsilon},
      {"confidence_c", &C::confidence_c},
      {"tau", &C::tau},
      {"ablation", &C::ablation},
      {"aggregator", &C::aggregator},
      {"model", &C::model},
      {"hidden", &C::hidden},
      {"lr", &C::lr},
      {"batch", &C::batch},
      {"local_epochs", &C::local_epochs},
      {"seeds", &C::seeds},
      {"output_dir", &C::output_dir},
      {"threads", &C::threads},
  };
  return defs;
}

const FieldDef* find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

// Returns an error message, or empty on success.
std::string assign(C& cfg, const Field& field, std::string_view raw) {
  const std::string_view v = trim(raw);
  if (v.empty()) return "missing value";
  return std::visit(
      [&](auto member) -> std::string {
        using T = std::remove_cvref_t<decltype(cfg.*member)>;
        if constexpr (std::is_same_v<T, int>) {
          int x = 0;
          if (!parse_number(v, x)) return "expected an integer, got '" + std::string(v) + "'";
          cfg.*member = x;
        } else if constexpr (std::is_same_v<T, double>) {
          double x = 0;
          if (!parse_number(v, x)) return "expected a number, got '" + std::string(v) + "'";
          cfg.*member = x;
        } else if constexpr (std::is_same_v<T, bool>) {
          if (v == "true") {
            cfg.*member = true;
          } else if (v == "false") {
            cfg.*member = false;
          } else {
            return "expected true or false, got '" + std::string(v) + "'";
          }
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (v.front() == '"') {
            if (v.size() < 2 || v.back() != '"') return "unterminated string";
            std::string s;
            for (std::size_t i = 1; i + 1 < v.size(); ++i) {
              if (v[i] == '\\' && i + 2 < v.size()) ++i;
              s.push_back(v[i]);
            }
            cfg.*member = std::move(s);
          } else {
            cfg.*member = std::string(v);
          }
        } else {
          std::vector<std::uint64_t> list;
          std::string_view body = v;
          if (body.front() == '[') {
            if (body.back() != ']') return "unterminated list";
            body = body.substr(1, body.size() - 2);
          }
          while (!trim(body).empty()) {
            const auto comma = body.find(',');
            const auto item = trim(body.substr(0, comma));
            std::uint64_t x = 0;
            if (!parse_number(item, x)) {
              return "expected a non-negative integer list item, got '" +
                     std::string(item) + "'";
            }
            list.push_back(x);
            if (comma == std::string_view::npos) break;
            body = body.substr(comma + 1);
          }
          cfg.*member = std::move(list);
        }
        return {};
      },
      field);
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, ptr);
  // Keep reals recognisable as reals.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string render(const C& cfg, const Field& field) {
  return std::visit(
      [&](auto member) -> std::string {
        using T = std::remove_cvref_t<decltype(cfg.*member)>;
        const auto& v = cfg.*member;
        if constexpr (std::is_same_v<T, int>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return quote(v);
        } else {
          std::string out = "[";
          for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ", ";
            out += std::to_string(v[i]);
          }
          return out + "]";
        }
      },
      field);
}

std::string issue_text(const std::vector<ConfigIssue>& issues) {
  std::ostringstream os;
  os << "invalid configuration:";
  for (const auto& i : issues) {
    os << "\n  ";
    if (i.line > 0) os << "line " << i.line << ": ";
    if (!i.key.empty()) os << i.key << ": ";
    os << i.message;
  }
  return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(issue_text(issues)), issues_(std::move(issues)) {}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.emplace_back(f.key);
  return keys;
}

std::vector<ConfigIssue> check_config(const C& c) {
  std::vector<ConfigIssue> out;
  auto bad = [&](bool failed, const char* key, std::string message) {
    if (failed) out.push_back({0, key, std::move(message)});
  };
  bad(c.dataset != "synthetic" && c.dataset != "idx", "dataset",
      "must be synthetic or idx");
  bad(c.dataset == "idx" && (c.idx_images.empty() || c.idx_labels.empty()),
      "dataset", "idx needs idx_images and idx_labels");
  bad(c.classes < 2, "classes", "must be >= 2");
  bad(c.examples < 2, "examples", "must be >= 2");
  bad(c.feature_dim < 1, "feature_dim", "must be >= 1");
  bad(!(c.blob_separation >= 0.0), "blob_separation", "must be >= 0");
  bad(!(c.eval_fraction > 0.0 && c.eval_fraction < 1.0), "eval_fraction",
      "must be in (0, 1)");
  bad(!(c.imbalance_factor > 0.0 && c.imbalance_factor <= 1.0),
      "imbalance_factor", "must be in (0, 1]");
  bad(!(c.dirichlet_alpha > 0.0), "dirichlet_alpha", "must be > 0");
  bad(c.n_clients < 1, "n_clients", "must be >= 1");
  bad(c.clients_per_round < 1 || c.clients_per_round > c.n_clients,
      "clients_per_round", "must be in [1, n_clients]");
  bad(c.clients_per_round > kMaxPlayers, "clients_per_round",
      "must be <= 64 (one coalition word)");
  bad(c.rounds < 0, "rounds", "must be >= 0");
  bad(c.estimator != "none" && !is_estimator_id(c.estimator), "estimator",
      "unknown estimator '" + c.estimator + "'");
  bad(c.Q < 1, "Q", "must be >= 1");
  bad(c.M < 1, "M", "must be >= 1");
  bad(!(c.eta >= 0.0 && c.eta <= 1.0), "eta", "must be in [0, 1]");
  bad(c.owen_mode != "paper" && c.owen_mode != "visited", "owen_mode",
      "must be paper or visited");
  bad(c.owen_grid != "right" && c.owen_grid != "midpoint" &&
          c.owen_grid != "stratified",
      "owen_grid", "must be right, midpoint or stratified");
  bad(!(c.gtg_eps >= 0.0), "gtg_eps", "must be >= 0");
  bad(!(c.wshap_alpha > 0.0), "wshap_alpha", "must be > 0");
  bad(!(c.wshap_beta > 0.0), "wshap_beta", "must be > 0");
  bad(!(c.epsilon >= 0.0 && c.epsilon <= 1.0), "epsilon", "must be in [0, 1]");
  bad(!(c.confidence_c > 0.0), "confidence_c", "must be > 0");
  bad(!(c.tau >= 0.0), "tau", "must be >= 0");
  bad(!is_aggregator_id(c.aggregator), "aggregator",
      "unknown aggregator '" + c.aggregator + "'");
  bad(c.model != "logistic" && c.model != "mlp", "model",
      "must be logistic or mlp");
  bad(c.hidden < 1, "hidden", "must be >= 1");
  bad(!(c.lr >= 0.0), "lr", "must be >= 0");
  bad(c.batch < 1, "batch", "must be >= 1");
  bad(c.local_epochs < 0, "local_epochs", "must be >= 0");
  bad(c.seeds.empty(), "seeds", "must list at least one seed");
  bad(c.threads < 0, "threads", "must be >= 0");
  return out;
}

void validate_config(const C& cfg) {
  auto issues = check_config(cfg);
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

ExperimentConfig parse_config(std::string_view text) {
  C cfg;
  std::vector<ConfigIssue> issues;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back({line_no, "", "expected key = value"});
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const FieldDef* def = find_field(key);
    if (def == nullptr) {
      issues.push_back({line_no, key, "unknown key"});
      continue;
    }
    if (auto it = seen.find(key); it != seen.end()) {
      issues.push_back({line_no, key,
                        "duplicate key (first set on line " +
                            std::to_string(it->second) + ")"});
      continue;
    }
    seen.emplace(key, line_no);
    if (auto err = assign(cfg, def->field, line.substr(eq + 1)); !err.empty()) {
      issues.push_back({line_no, key, err});
    }
  }
  for (auto& issue : check_config(cfg)) {
    if (auto it = seen.find(issue.key); it != seen.end()) issue.line = it->second;
    issues.push_back(std::move(issue));
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const C& cfg) {
  std::string out;
  for (const auto& f : fields()) {
    out += std::string(f.key) + " = " + render(cfg, f.field) + "\n";
  }
  return out;
}

void set_config_value(C& cfg, std::string_view key, std::string_view value) {
  const FieldDef* def = find_field(key);
  if (def == nullptr) throw ConfigError({{0, std::string(key), "unknown key"}});
  if (auto err = assign(cfg, def->field, value); !err.empty()) {
    throw ConfigError({{0, std::string(key), err}});
  }
}

}  // namespace fedowen
