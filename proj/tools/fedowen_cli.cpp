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

// Command-line front end: run, value, sweep.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fedowen/budget.hpp"
#include "fedowen/config.hpp"
#include "fedowen/estimators.hpp"
#include "fedowen/game.hpp"
#include "fedowen/results.hpp"
#include "fedowen/simulator.hpp"

namespace fs = std::filesystem;
using namespace fedowen;

namespace {

void print_report(const ExperimentReport& report, const fs::path& dir) {
  for (const auto& run : report.runs) {
    std::cout << "seed " << run.seed << ": initial " << format_real(run.initial_accuracy)
              << ", final " << format_real(run.final_accuracy) << "\n";
  }
  std::cout << "mean final accuracy " << format_real(report.mean_final_accuracy)
            << " (std " << format_real(report.std_final_accuracy) << ")\n"
            << "results written to " << dir.string() << "\n";
}

int cmd_run(const std::string& config_path, const std::string& output) {
  ExperimentConfig cfg = load_config(config_path);
  if (!output.empty()) cfg.output_dir = output;
  const ExperimentReport report = run_experiment(cfg);
  write_results(report, cfg.output_dir);
  print_report(report, cfg.output_dir);
  return 0;
}

struct ValueArgs {
  std::string game = "majority";
  int n = 5;
  std::uint64_t seed = 1;
  std::string estimator = "owen";
  int Q = 2;
  int M = 4;
  double eta = 0.05;
  std::string mode = "visited";
  std::string grid = "stratified";
  std::vector<double> weights;
};

int cmd_value(const ValueArgs& a) {
  const CoalitionalGame game =
      a.weights.empty() ? standard_game(a.game, a.n, a.seed) : additive_game(a.weights);
  const int n = game.players();
  const double v_empty = game(Coalition::empty(n));
  const double v_full = game(Coalition::full(n));
  const NormalizedGame ng = v_full != v_empty ? normalize(game) : shift_only(game, v_full);

  EstimatorSpec spec;
  spec.id = a.estimator;
  spec.levels = a.Q;
  spec.draws = a.M;
  spec.eta = a.eta;
  spec.mode = parse_owen_mode(a.mode);
  spec.grid = parse_owen_grid(a.grid);
  spec.seed = a.seed;
  BudgetMeter meter(static_cast<std::int64_t>(n) * a.M);
  const ContributionVector est = run_estimator(ng, spec, meter);

  const bool have_exact = n <= kMaxExactPlayers;
  std::vector<double> exact;
  if (have_exact) exact = exact_shapley(game).values;

  std::cout << "game " << game.name() << ", n = " << n << ", estimator " << spec.id
            << ", budget " << meter.used() << "/" << meter.limit() << "\n";
  std::cout << "player,estimate" << (have_exact ? ",exact_shapley,error" : "") << "\n";
  for (int i = 0; i < n; ++i) {
    const double e = est.values[static_cast<std::size_t>(i)] * ng.scale();
    std::cout << i << "," << format_real(e);
    if (have_exact) {
      const double x = exact[static_cast<std::size_t>(i)];
      std::cout << "," << format_real(x) << "," << format_real(e - x);
    }
    std::cout << "\n";
  }
  return 0;
}

std::string path_token(std::string s) {
  for (char& c : s) {
    if (c == '/' || c == '\\' || c == ' ') c = '_';
  }
  return s;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<std::string>& values, const std::string& output) {
  const ExperimentConfig base = load_config(config_path);
  const fs::path root = output.empty() ? fs::path(base.output_dir) : fs::path(output);
  std::vector<std::pair<std::string, ExperimentConfig>> plan;
  for (const auto& v : values) {
    ExperimentConfig cfg = base;
    set_config_value(cfg, param, v);
    validate_config(cfg);
    cfg.output_dir = (root / (param + "_" + path_token(v))).string();
    plan.emplace_back(v, std::move(cfg));
  }
  std::cout << param << ",mean_final_accuracy,std_final_accuracy,summary\n";
  for (const auto& [v, cfg] : plan) {
    const ExperimentReport report = run_experiment(cfg);
    write_results(report, cfg.output_dir);
    std::cout << v << "," << format_real(report.mean_final_accuracy) << ","
              << format_real(report.std_final_accuracy) << ","
              << (fs::path(cfg.output_dir) / "summary.json").string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fedowen: contribution valuation and federated-learning simulation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  auto* run = app.add_subcommand("run", "Run a full experiment from a config file");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("-o,--output", output, "Override output_dir");

  ValueArgs va;
  auto* value = app.add_subcommand("value", "Estimate contributions on a test game");
  value->add_option("--game", va.game, "Game name")
      ->check(CLI::IsMember(standard_game_names()));
  value->add_option("--n", va.n, "Number of players")->check(CLI::Range(1, 64));
  value->add_option("--seed", va.seed, "Seed");
  value->add_option("--estimator", va.estimator, "Estimator id")
      ->check(CLI::IsMember(estimator_ids()));
  value->add_option("--Q", va.Q, "Inclusion levels")->check(CLI::PositiveNumber);
  value->add_option("--M", va.M, "Samples per player")->check(CLI::PositiveNumber);
  value->add_option("--eta", va.eta, "Walk truncation tolerance")->check(CLI::NonNegativeNumber);
  value->add_option("--mode", va.mode, "Owen walk normalization")
      ->check(CLI::IsMember({"paper", "visited"}));
  value->add_option("--grid", va.grid, "Strict Owen level grid")
      ->check(CLI::IsMember({"right", "midpoint", "stratified"}));
  value->add_option("--weights", va.weights, "Additive game weights (overrides --game)")
      ->delimiter(',');

  std::string sweep_config;
  std::string param;
  std::vector<std::string> values;
  std::string sweep_output;
  auto* sweep = app.add_subcommand("sweep", "Repeat an experiment over parameter values");
  sweep->add_option("config", sweep_config, "Config file")->required();
  sweep->add_option("--param", param, "Config key to vary")
      ->required()
      ->check(CLI::IsMember(config_keys()));
  sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  sweep->add_option("-o,--output", sweep_output, "Root output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(config_path, output);
    if (*value) return cmd_value(va);
    if (*sweep) return cmd_sweep(sweep_config, param, values, sweep_output);
  } catch (const std::exception& e) {
    std::cerr << "fedowen: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
