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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fedowen/config.hpp"
#include "fedowen/idx.hpp"
#include "fedowen/results.hpp"

using namespace fedowen;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(FEDOWEN_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<ConfigIssue> issues_of(std::string_view text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

}  // namespace

TEST_CASE("config defaults") {
  const ExperimentConfig cfg = parse_config("");
  CHECK(cfg == ExperimentConfig{});
  CHECK(cfg.estimator == "owen");
  CHECK(cfg.M == 4);
  CHECK(cfg.Q == 2);
  CHECK(cfg.epsilon == 0.1);
  CHECK(cfg.n_clients == 100);
  CHECK(cfg.clients_per_round == 10);
  CHECK(cfg.rounds == 100);
}

TEST_CASE("config values and errors") {
  const ExperimentConfig cfg = parse_config(
      "# comment\nrounds = 100\nn_clients = 100\nclients_per_round = 10  # ten\n"
      "estimator = \"gtg\"\nmodel = mlp\nablation = true\nseeds = [3, 4, 5]\n"
      "eta = 0\n");
  CHECK(cfg.rounds == 100);
  CHECK(cfg.clients_per_round == 10);
  CHECK(cfg.estimator == "gtg");
  CHECK(cfg.model == "mlp");
  CHECK(cfg.ablation);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 4, 5});
  CHECK(cfg.eta == 0.0);

  auto eps = issues_of("epsilon = 1.5\n");
  REQUIRE(eps.size() == 1);
  CHECK(eps[0].key == "epsilon");
  CHECK(eps[0].line == 1);

  auto many = issues_of("rounds = 5\nbogus = 1\nQ = two\nrounds = 6\nclients_per_round = 0\n");
  REQUIRE(many.size() == 4);
  CHECK(many[0].line == 2);
  CHECK(many[0].message == "unknown key");
  CHECK(many[1].key == "Q");
  CHECK(many[1].line == 3);
  CHECK(many[2].line == 4);
  CHECK(many[3].key == "clients_per_round");
  CHECK(many[3].line == 5);

  CHECK(issues_of("no equals sign\n").size() == 1);
  CHECK(issues_of("estimator = \"magic\"\n").size() == 1);
  CHECK(issues_of("seeds = []\n").size() == 1);
  CHECK(issues_of("ablation = maybe\n").size() == 1);
  CHECK(issues_of("M = 3.5\n").size() == 1);

  try {
    (void)parse_config("epsilon = 2\nQ = 0\n");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("epsilon") != std::string::npos);
    CHECK(what.find("Q") != std::string::npos);
    CHECK(what.find("line 2") != std::string::npos);
  }
}

TEST_CASE("config round trip") {
  ExperimentConfig cfg;
  cfg.estimator = "wshap";
  cfg.eta = 0.125;
  cfg.lr = 1e-3;
  cfg.epsilon = 1.0;
  cfg.idx_images = "dir with \"quotes\"/img";
  cfg.seeds = {1, 18446744073709551615ull};
  cfg.output_dir = "out # not a comment";
  CHECK(parse_config(serialize_config(cfg)) == cfg);
  CHECK(parse_config(serialize_config(ExperimentConfig{})) == ExperimentConfig{});

  set_config_value(cfg, "Q", "8");
  CHECK(cfg.Q == 8);
  CHECK_THROWS_AS(set_config_value(cfg, "Q", "x"), ConfigError);
  CHECK_THROWS_AS(set_config_value(cfg, "nope", "1"), ConfigError);
  CHECK_THROWS_AS(load_config("definitely/missing.toml"), Error);
}

TEST_CASE("idx golden file") {
  const std::vector<std::uint8_t> bytes = {0, 0, 8, 3, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 2,
                                           1, 2, 3, 4};
  const IdxTensor t = parse_idx(bytes);
  CHECK(t.dims == std::vector<std::uint32_t>{1, 2, 2});
  CHECK(t.data == std::vector<std::uint8_t>{1, 2, 3, 4});
  CHECK(encode_idx(t) == bytes);
}

TEST_CASE("idx errors are distinct") {
  auto kind_of = [](std::vector<std::uint8_t> b) {
    try {
      (void)parse_idx(b);
    } catch (const IdxError& e) {
      return e.kind();
    }
    FAIL("expected an idx error");
    return IdxErrorKind::kIo;
  };
  CHECK(kind_of({1, 0, 8, 1, 0, 0, 0, 1, 7}) == IdxErrorKind::kBadMagic);
  CHECK(kind_of({0, 0, 9, 1, 0, 0, 0, 1, 7}) == IdxErrorKind::kUnsupportedType);
  CHECK(kind_of({0, 0, 8, 2, 0, 0, 0}) == IdxErrorKind::kTruncatedHeader);
  CHECK(kind_of({0, 0, 8, 1, 0, 0, 0, 3, 7}) == IdxErrorKind::kTruncatedPayload);
  CHECK(kind_of({0, 0, 8, 1, 0, 0, 0, 1, 7, 8}) == IdxErrorKind::kTrailingBytes);

  try {
    (void)parse_idx(std::vector<std::uint8_t>{0, 0, 8, 2, 0, 0, 0, 2, 0, 0, 0, 3, 1, 2});
    FAIL("expected truncation");
  } catch (const IdxError& e) {
    const std::string what = e.what();
    CHECK(what.find('6') != std::string::npos);
    CHECK(what.find('2') != std::string::npos);
  }

  const IdxTensor images{{2, 1, 1}, {0, 255}};
  const IdxTensor labels{{3}, {0, 1, 1}};
  try {
    (void)idx_to_dataset(images, labels);
    FAIL("expected a dim mismatch");
  } catch (const IdxError& e) {
    CHECK(e.kind() == IdxErrorKind::kDimMismatch);
  }
  CHECK_THROWS_AS(read_idx("definitely/missing.idx"), IdxError);
}

TEST_CASE("idx files round trip into a dataset") {
  const fs::path dir = scratch("idx");
  const IdxTensor images{{3, 2, 2}, {0, 51, 102, 153, 204, 255, 0, 0, 1, 2, 3, 4}};
  const IdxTensor labels{{3}, {2, 0, 1}};
  write_idx(dir / "img.idx", images);
  write_idx(dir / "lab.idx", labels);
  CHECK(read_idx(dir / "img.idx") == images);
  const Dataset d = load_idx_dataset(dir / "img.idx", dir / "lab.idx");
  CHECK(d.size() == 3);
  CHECK(d.dim == 4);
  CHECK(d.classes == 3);
  CHECK(d.labels == std::vector<int>{2, 0, 1});
  CHECK(d.row(1)[1] == 1.0);
  CHECK(d.row(0)[1] == doctest::Approx(0.2));
}

TEST_CASE("result writers") {
  ExperimentReport empty;
  empty.config.n_clients = 3;
  empty.config.rounds = 0;
  empty.runs.push_back(RunResult{1, 0.5, 0.5, {}});
  const std::string csv = round_csv(empty.runs[0], 3);
  CHECK(csv == "round,selected_ids,phi_0,phi_1,phi_2,alpha,eval_accuracy,utility_calls\n");

  const auto doc = nlohmann::json::parse(summary_json(empty));
  CHECK(doc["rounds"] == 0);
  CHECK(doc["runs"].size() == 1);
  CHECK(doc["config"]["estimator"] == "owen");
  CHECK(doc["config"]["M"] == 4);
  CHECK(doc["mean_final_accuracy"] == 0.0);

  RunResult run{7, 0.1, 0.4, {}};
  run.rounds.push_back(RoundRecord{1, {2, 0}, {0.1, 0.0, 0.25}, {0.3, 0.7}, 0.4, 8, false});
  CHECK(round_csv(run, 3).substr(csv.size()) == "1,2;0,0.1,0,0.25,0.3;0.7,0.4,8\n");

  ExperimentReport three;
  three.config.n_clients = 3;
  for (std::uint64_t s : {1, 2, 3}) three.runs.push_back(RunResult{s, 0.0, 0.1, {}});
  const fs::path dir = scratch("results");
  const auto files = write_results(three, dir);
  CHECK(files.size() == 4);
  CHECK(fs::exists(dir / "rounds_seed2.csv"));
  CHECK(fs::exists(dir / "summary.json"));
  const std::string first = slurp(dir / "summary.json");
  write_results(three, dir);
  CHECK(slurp(dir / "summary.json") == first);

  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1.0) == "1");
}
