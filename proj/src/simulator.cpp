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

#include "fedowen/simulator.hpp"

#include <cmath>
#include <numeric>

#include "fedowen/config.hpp"
#include "fedowen/idx.hpp"
#include "fedowen/parallel.hpp"
#include "fedowen/rng.hpp"

namespace fedowen {

double coalition_utility(const UtilityContext& ctx, Coalition s,
                         BudgetMeter* budget) {
  if (budget) budget->charge(1);
  if (s.is_empty()) return accuracy(*ctx.spec, *ctx.base, *ctx.eval);
  const auto& updates = *ctx.updates;
  if (s.players() != static_cast<int>(updates.size())) {
    throw InvalidArgument("coalition does not match the round's participants");
  }
  const std::vector<int> members = s.members();
  ModelParams avg{ctx.base->layout,
                  std::vector<double>(ctx.base->values.size(), 0.0)};
  const double w = 1.0 / static_cast<double>(members.size());
  for (int i : members) {
    const auto& v = updates[static_cast<std::size_t>(i)].values;
    for (std::size_t p = 0; p < v.size(); ++p) avg.values[p] += w * v[p];
  }
  if (members.size() == 1) avg.values = updates[static_cast<std::size_t>(members[0])].values;
  return accuracy(*ctx.spec, avg, *ctx.eval);
}

CoalitionalGame utility_game(const UtilityContext& ctx) {
  const int k = static_cast<int>(ctx.updates->size());
  return CoalitionalGame(
      k, [ctx](Coalition s) { return coalition_utility(ctx, s); },
      "coalition-accuracy");
}

Dataset load_source_dataset(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.dataset == "idx") {
    return load_idx_dataset(cfg.idx_images, cfg.idx_labels, cfg.classes);
  }
  BlobSpec blobs;
  blobs.classes = cfg.classes;
  blobs.examples = cfg.examples;
  blobs.dim = cfg.feature_dim;
  blobs.separation = cfg.blob_separation;
  blobs.seed = seed;
  return make_blobs(blobs);
}

// Simulation ---------------------------------------------------------------

Simulation::Simulation(ExperimentConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), seed_(seed) {
  validate_config(cfg_);
  const Dataset source = load_source_dataset(cfg_, seed_);
  auto [train_all, eval] = split_eval_set(source, cfg_.eval_fraction, seed_);
  train_ = apply_longtail(train_all, cfg_.imbalance_factor, seed_);
  eval_ = std::move(eval);
  shards_ = dirichlet_partition(
      train_, PartitionSpec{cfg_.n_clients, cfg_.dirichlet_alpha, seed_, 100});
  init_model_and_state();
}

Simulation::Simulation(ExperimentConfig cfg, std::uint64_t seed, Dataset train,
                       Dataset eval,
                       std::vector<std::vector<std::size_t>> shards)
    : cfg_(std::move(cfg)),
      seed_(seed),
      train_(std::move(train)),
      eval_(std::move(eval)),
      shards_(std::move(shards)) {
  cfg_.n_clients = static_cast<int>(shards_.size());
  cfg_.classes = train_.classes;
  cfg_.feature_dim = train_.dim;
  validate_config(cfg_);
  init_model_and_state();
}

void Simulation::init_model_and_state() {
  spec_.arch = parse_architecture(cfg_.model);
  spec_.dim = train_.dim;
  spec_.classes = train_.classes;
  spec_.hidden = cfg_.hidden;
  global_ = init_model(spec_, seed_);
  phi_.assign(static_cast<std::size_t>(cfg_.n_clients), 0.0);
  bandit_ = BanditState(static_cast<std::size_t>(cfg_.n_clients));
  round_ = 0;
}

double Simulation::eval_accuracy() const {
  return accuracy(spec_, global_, eval_);
}

RoundRecord Simulation::run_round() {
  RoundRecord rec;
  rec.round = ++round_;
  const auto round_index = static_cast<std::uint32_t>(round_ - 1);
  const int k = cfg_.clients_per_round;

  // 1. selection
  CounterRng sel_rng(seed_, StreamTag::kSelection, round_index);
  if (cfg_.ablation) {
    rec.selected = uniform_sample_without_replacement(cfg_.n_clients, k, sel_rng);
    for (int i : rec.selected) ++bandit_.sigma[static_cast<std::size_t>(i)];
  } else {
    SelectionConfig sel;
    sel.epsilon = cfg_.epsilon;
    sel.c = cfg_.confidence_c;
    sel.tau = cfg_.tau;
    sel.k = k;
    auto outcome = select_clients(phi_, bandit_, sel, sel_rng);
    rec.selected = std::move(outcome.selected);
    rec.explored = outcome.explored;
  }

  // 2. local training from the current global model
  const TrainConfig train_cfg{cfg_.local_epochs, cfg_.lr, cfg_.batch};
  std::vector<ModelParams> updates(rec.selected.size());
  parallel_for(rec.selected.size(), static_cast<unsigned>(cfg_.threads),
               [&](std::size_t p) {
                 const int client = rec.selected[p];
                 CounterRng rng(seed_, StreamTag::kTraining, round_index,
                                static_cast<std::uint32_t>(client));
                 updates[p] = local_train(spec_, global_, train_,
                                          shards_[static_cast<std::size_t>(client)],
                                          train_cfg, rng)
                                  .params;
               });

  // 3-4. valuation of the participants on a normalized utility
  std::vector<double> estimate(updates.size(), 0.0);
  const bool valued = cfg_.estimator != "none";
  if (valued) {
    const UtilityContext ctx{&spec_, &global_, &updates, &eval_};
    const CoalitionalGame game = utility_game(ctx);
    const double v_empty = coalition_utility(ctx, Coalition::empty(k));
    const double v_full = coalition_utility(ctx, Coalition::full(k));
    const NormalizedGame ng =
        v_full > v_empty ? normalize(game) : shift_only(game, 1.0);
    EstimatorSpec es;
    es.id = cfg_.estimator;
    es.levels = cfg_.Q;
    es.draws = cfg_.M;
    es.eta = cfg_.eta;
    es.mode = parse_owen_mode(cfg_.owen_mode);
    es.grid = parse_owen_grid(cfg_.owen_grid);
    es.gtg_eps = cfg_.gtg_eps;
    es.wshap_alpha = cfg_.wshap_alpha;
    es.wshap_beta = cfg_.wshap_beta;
    es.seed = CounterRng(seed_, StreamTag::kValuation, round_index)();
    BudgetMeter meter(static_cast<std::int64_t>(k) * cfg_.M);
    estimate = run_estimator(ng, es, meter).values;
    rec.utility_calls = meter.used();
  }

  // 5. aggregation weights and the new global model
  if (cfg_.aggregator == "fedavg") {
    rec.alpha.assign(updates.size(), 1.0 / static_cast<double>(updates.size()));
  } else if (cfg_.aggregator == "shapfed-wa") {
    const std::string_view out = spec_.output_weights();
    const Segment& seg = global_.segment(out);
    const auto base = global_.view(out);
    std::vector<std::vector<std::vector<double>>> grads(updates.size());
    for (std::size_t p = 0; p < updates.size(); ++p) {
      const auto mine = updates[p].view(out);
      grads[p].resize(static_cast<std::size_t>(seg.rows));
      for (std::size_t c = 0; c < grads[p].size(); ++c) {
        auto& row = grads[p][c];
        row.resize(static_cast<std::size_t>(seg.cols));
        for (std::size_t j = 0; j < row.size(); ++j) {
          const std::size_t at = c * row.size() + j;
          row[j] = mine[at] - base[at];
        }
      }
    }
    rec.alpha = shapfed_wa_class_weights(grads);
  } else {
    rec.alpha = softmax_weights(estimate);
  }
  global_ = aggregate(updates, rec.alpha);

  // 6. contribution history and bandit clock
  if (valued) {
    for (std::size_t p = 0; p < rec.selected.size(); ++p) {
      auto& stored = phi_[static_cast<std::size_t>(rec.selected[p])];
      stored = (1.0 - kPhiUpdateWeight) * stored + kPhiUpdateWeight * estimate[p];
    }
  }
  ++bandit_.t;

  // 7. log
  rec.phi = phi_;
  rec.eval_accuracy = eval_accuracy();
  return rec;
}

RunResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  Simulation sim(cfg, seed);
  RunResult run;
  run.seed = seed;
  run.initial_accuracy = sim.eval_accuracy();
  run.final_accuracy = run.initial_accuracy;
  run.rounds.reserve(static_cast<std::size_t>(cfg.rounds));
  for (int r = 0; r < cfg.rounds; ++r) {
    run.rounds.push_back(sim.run_round());
    run.final_accuracy = run.rounds.back().eval_accuracy;
  }
  return run;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  ExperimentReport report;
  report.config = cfg;
  for (std::uint64_t seed : cfg.seeds) report.runs.push_back(run_seed(cfg, seed));
  const double n = static_cast<double>(report.runs.size());
  double sum = 0.0;
  for (const auto& r : report.runs) sum += r.final_accuracy;
  report.mean_final_accuracy = sum / n;
  double sq = 0.0;
  for (const auto& r : report.runs) {
    const double d = r.final_accuracy - report.mean_final_accuracy;
    sq += d * d;
  }
  report.std_final_accuracy = report.runs.size() > 1 ? std::sqrt(sq / (n - 1)) : 0.0;
  return report;
}

}  // namespace fedowen
