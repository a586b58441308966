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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedowen/budget.hpp"
#include "fedowen/game.hpp"

namespace fedowen {

/// How owen_walk turns per-level increment sums into estimates.
enum class OwenNormalization {
  /// Divide each level's sum by that level's walk count and average the
  /// levels. Reproduces the printed pseudocode; on an additive game the
  /// result is scaled by the mean inclusion probability.
  kPaper,
  /// Divide player j's total by the number of walks that visited j.
  kVisited,
};

/// Where the strict Owen estimator places its inclusion probabilities
/// inside each of the Q strata of [0, 1].
enum class OwenGrid {
  /// q = i/Q, i = 1..Q. A right Riemann sum: biased by O(1/Q).
  kRightEndpoint,
  /// q = (i - 1/2)/Q. Biased by O(1/Q^2).
  kMidpoint,
  /// q ~ Uniform((i-1)/Q, i/Q), one draw per mask. Unbiased for every Q.
  kStratified,
};

struct OwenConfig {
  int levels = 2;               // Q
  int draws = 4;                // M
  double eta = 0.05;            // truncation tolerance; 0 disables it
  OwenNormalization mode = OwenNormalization::kVisited;
  std::uint64_t seed = 0;
};

/// One permutation walk of owen_walk.
struct WalkRecord {
  int level = 0;                   // 0-based; q = (level + 1) / Q
  double q = 0.0;
  std::vector<int> order;          // selected players in walk order
  std::vector<double> increments;  // one per evaluated prefix of `order`
  bool truncated = false;          // stopped by eta with players left
  bool budget_cut = false;         // stopped because the meter refused
};

/// Owen sampling with eta-truncation and budget recycling.
///
/// Walks cycle the inclusion levels q = 1/Q, ..., 1 round-robin. Each walk
/// draws a Bernoulli(q) mask, visits the selected players in random order
/// and records v(C + j) - v(C) for every visited j. A walk stops early once
/// the optimistic remainder `game.ceiling() - v(C)` drops below eta.
/// Whatever the walk did not spend goes to further walks, so on return
/// `budget.used() == budget.limit()` (except for the n = 1 shortcut).
///
/// Walk w at level l uses streams (seed, kOwenMask, l, w) and
/// (seed, kPermutation, l, w); with Q = 1 and eta = 0 the walks are the
/// permutations mc_shapley draws under the same seed.
ContributionVector owen_walk(const NormalizedGame& game, const OwenConfig& cfg,
                             BudgetMeter& budget,
                             std::vector<WalkRecord>* trace = nullptr);

/// Strict Owen estimator: for every mask S and every player j evaluates the
/// present/absent twins v(S + j) - v(S - j) and averages over masks and
/// levels. Costs n + 1 calls per mask.
///
/// Without a meter, runs exactly `draws` masks per level (levels may run in
/// parallel; the result does not depend on `threads`). With a meter, masks
/// are reserved round-robin across levels, at most `draws` per level, until
/// the meter refuses.
ContributionVector owen_strict(const CoalitionalGame& game, int levels,
                               int draws, std::uint64_t seed,
                               OwenGrid grid = OwenGrid::kStratified,
                               BudgetMeter* budget = nullptr,
                               unsigned threads = 1);

/// Permutation-sampling Shapley. Reserves n calls per permutation up front;
/// a permutation the meter cannot pay for is not started.
ContributionVector mc_shapley(const CoalitionalGame& game, int permutations,
                              BudgetMeter& budget, std::uint64_t seed);

/// GTG-style guided truncation: inside a permutation, v(S + i) is only
/// evaluated while |v(N) - v_prev| >= eps; otherwise the marginal is 0.
ContributionVector gtg_shapley(const CoalitionalGame& game, double eps,
                               int permutations, BudgetMeter& budget,
                               std::uint64_t seed);

/// Per-player contributions of one GTG pass over `order`. Unmetered.
std::vector<double> gtg_marginals(const CoalitionalGame& game,
                                  std::span<const int> order, double eps);

/// Monte-Carlo Banzhaf: M uniform subsets, marginals of every outsider,
/// sums divided by M. Estimates exact_banzhaf / 2.
ContributionVector data_banzhaf(const CoalitionalGame& game, int samples,
                                BudgetMeter& budget, std::uint64_t seed);

/// Position weights Beta-pdf(alpha, beta) at (j - 1/2)/n, rescaled to mean 1.
std::vector<double> beta_position_weights(int n, double alpha, double beta);

/// Permutation sampling with position-dependent weights.
ContributionVector weighted_shap(const CoalitionalGame& game, double alpha,
                                 double beta, int permutations,
                                 BudgetMeter& budget, std::uint64_t seed);

// Registry -----------------------------------------------------------------

struct EstimatorSpec {
  std::string id = "owen";
  int levels = 2;
  int draws = 4;
  double eta = 0.05;
  OwenNormalization mode = OwenNormalization::kVisited;
  OwenGrid grid = OwenGrid::kStratified;
  double gtg_eps = 0.01;
  double wshap_alpha = 2.0;
  double wshap_beta = 2.0;
  std::uint64_t seed = 0;
};

/// "owen", "owen-strict", "mc", "gtg", "banzhaf", "wshap".
const std::vector<std::string>& estimator_ids();
bool is_estimator_id(std::string_view id);

/// Runs estimator `spec.id` on `game`, charging `budget`. Permutation-based
/// estimators run `spec.draws` permutations (or as many as the meter
/// allows); owen fills the meter.
ContributionVector run_estimator(const NormalizedGame& game,
                                 const EstimatorSpec& spec,
                                 BudgetMeter& budget);

OwenNormalization parse_owen_mode(std::string_view text);
std::string_view to_string(OwenNormalization mode);
OwenGrid parse_owen_grid(std::string_view text);
std::string_view to_string(OwenGrid grid);

}  // namespace fedowen
