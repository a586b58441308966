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

#include <cstdint>
#include <string>
#include <vector>

#include "fedowen/aggregation.hpp"
#include "fedowen/budget.hpp"
#include "fedowen/dataset.hpp"
#include "fedowen/estimators.hpp"
#include "fedowen/model.hpp"
#include "fedowen/selection.hpp"

namespace fedowen {

/// Every knob of a simulated federated run. Defaults follow the reference
/// setup: 100 clients, 10 per round, 100 rounds, M = 4, Q = 2, epsilon 0.1.
struct ExperimentConfig {
  // data
  std::string dataset = "synthetic";  // synthetic | idx
  std::string idx_images;
  std::string idx_labels;
  int classes = 10;
  int examples = 6000;
  int feature_dim = 20;
  double blob_separation = 0.35;
  double eval_fraction = 0.01;
  double imbalance_factor = 0.01;
  double dirichlet_alpha = 0.1;
  // federation
  int n_clients = 100;
  int clients_per_round = 10;
  int rounds = 100;
  // valuation
  std::string estimator = "owen";  // registry id, or "none"
  int Q = 2;
  int M = 4;
  double eta = 0.05;
  std::string owen_mode = "visited";
  std::string owen_grid = "stratified";
  double gtg_eps = 0.01;
  double wshap_alpha = 2.0;
  double wshap_beta = 2.0;
  // selection
  double epsilon = 0.1;
  double confidence_c = 0.1;
  double tau = 0.0;
  bool ablation = false;  // true: uniform random selection
  // aggregation
  std::string aggregator = "softmax-contrib";
  // local training
  std::string model = "logistic";
  int hidden = 32;
  double lr = 0.05;
  int batch = 16;
  int local_epochs = 1;
  // run
  std::vector<std::uint64_t> seeds = {1};
  std::string output_dir = "results";
  int threads = 1;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

/// Weight of the newest estimate in the stored contribution history.
inline constexpr double kPhiUpdateWeight = 0.3;

struct RoundRecord {
  int round = 0;                  // 1-based
  std::vector<int> selected;
  std::vector<double> phi;        // stored contributions, all clients
  std::vector<double> alpha;      // aggregation weights, participants
  double eval_accuracy = 0.0;
  std::int64_t utility_calls = 0;
  bool explored = false;
};

struct RunResult {
  std::uint64_t seed = 0;
  double initial_accuracy = 0.0;
  double final_accuracy = 0.0;
  std::vector<RoundRecord> rounds;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RunResult> runs;
  double mean_final_accuracy = 0.0;
  double std_final_accuracy = 0.0;
};

/// Everything a coalition utility needs: the round's starting model, the
/// participants' trained models and the server's evaluation set.
struct UtilityContext {
  const ModelSpec* spec = nullptr;
  const ModelParams* base = nullptr;
  const std::vector<ModelParams>* updates = nullptr;
  const Dataset* eval = nullptr;
};

/// Accuracy on the evaluation set of the uniform average of the members'
/// models; the base model for the empty coalition. Charges `budget` one
/// call when given (throws BudgetExhausted on refusal).
double coalition_utility(const UtilityContext& ctx, Coalition s,
                         BudgetMeter* budget = nullptr);

/// The utility over a round's participants as a game.
CoalitionalGame utility_game(const UtilityContext& ctx);

/// Data, clients and server state of one seeded run.
class Simulation {
 public:
  Simulation(ExperimentConfig cfg, std::uint64_t seed);
  /// Uses caller-supplied client shards (rows of `train`).
  Simulation(ExperimentConfig cfg, std::uint64_t seed, Dataset train,
             Dataset eval, std::vector<std::vector<std::size_t>> shards);

  /// select, train, value, aggregate, update history; one round.
  RoundRecord run_round();

  const ExperimentConfig& config() const noexcept { return cfg_; }
  const ModelSpec& model_spec() const noexcept { return spec_; }
  const ModelParams& global_model() const noexcept { return global_; }
  const Dataset& train_set() const noexcept { return train_; }
  const Dataset& eval_set() const noexcept { return eval_; }
  const std::vector<std::vector<std::size_t>>& shards() const noexcept {
    return shards_;
  }
  const std::vector<double>& phi() const noexcept { return phi_; }
  const BanditState& bandit() const noexcept { return bandit_; }
  double eval_accuracy() const;

 private:
  void init_model_and_state();

  ExperimentConfig cfg_;
  std::uint64_t seed_;
  ModelSpec spec_;
  Dataset train_;
  Dataset eval_;
  std::vector<std::vector<std::size_t>> shards_;
  ModelParams global_;
  std::vector<double> phi_;
  BanditState bandit_;
  int round_ = 0;
};

/// Source data for a config: synthetic blobs or the IDX pair.
Dataset load_source_dataset(const ExperimentConfig& cfg, std::uint64_t seed);

RunResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed);

/// All seeds of `cfg`, plus the mean/std of final accuracy.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace fedowen
