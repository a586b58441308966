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

#include "fedowen/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fedowen/error.hpp"
#include "fedowen/parallel.hpp"
#include "fedowen/rng.hpp"

namespace fedowen {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw InvalidArgument(message);
}

void require_players(const CoalitionalGame& game) {
  require(game.players() >= 1, "estimator needs at least one player");
}

std::uint32_t u32(std::int64_t v) { return static_cast<std::uint32_t>(v); }

// With a single player every estimator reduces to v(N) - v(empty).
ContributionVector single_player(const CoalitionalGame& game,
                                 std::string id) {
  const double full = game.value(Coalition::full(1));
  const double none = game.value(Coalition::empty(1));
  return {{full - none}, std::move(id), 0};
}

std::vector<double> divide(std::vector<double> sums, std::int64_t count) {
  if (count > 0) {
    for (auto& s : sums) s /= static_cast<double>(count);
  } else {
    std::fill(sums.begin(), sums.end(), 0.0);
  }
  return sums;
}

}  // namespace

// Owen walk ----------------------------------------------------------------

ContributionVector owen_walk(const NormalizedGame& game, const OwenConfig& cfg,
                             BudgetMeter& budget,
                             std::vector<WalkRecord>* trace) {
  require(cfg.levels >= 1, "owen_walk: Q must be >= 1");
  require(cfg.eta >= 0.0, "owen_walk: eta must be >= 0");
  require(game.players() >= 1, "owen_walk: game has no players");
  if (budget.limit() == 0) throw InvalidArgument("owen_walk: zero budget");

  const int n = game.players();
  if (n == 1) {
    return {{(game.v_full() - game.v_empty()) / game.scale()}, "owen", 0};
  }

  const auto un = static_cast<std::size_t>(n);
  const auto levels = static_cast<std::size_t>(cfg.levels);
  std::vector<std::vector<double>> sums(levels, std::vector<double>(un, 0.0));
  std::vector<std::int64_t> walks(levels, 0);
  std::vector<std::int64_t> visits(un, 0);
  const std::int64_t used_before = budget.used();
  const double ceiling = game.ceiling();

  std::vector<int> selected;
  selected.reserve(un);
  bool out_of_budget = false;
  for (std::int64_t walk = 0; !out_of_budget && !budget.exhausted(); ++walk) {
    const auto level = static_cast<std::size_t>(walk % cfg.levels);
    const std::int64_t index = walk / cfg.levels;
    const double q = static_cast<double>(level + 1) / cfg.levels;

    CounterRng mask_rng(cfg.seed, StreamTag::kOwenMask, u32(level), u32(index));
    selected.clear();
    for (int j = 0; j < n; ++j) {
      if (mask_rng.bernoulli(q)) selected.push_back(j);
    }
    CounterRng order_rng(cfg.seed, StreamTag::kPermutation, u32(level),
                         u32(index));
    shuffle(selected, order_rng);

    WalkRecord record;
    record.level = static_cast<int>(level);
    record.q = q;
    if (trace) record.order = selected;

    Coalition coalition(n);
    double v_prev = 0.0;
    std::size_t visited = 0;
    for (std::size_t pos = 0; pos < selected.size(); ++pos) {
      if (!budget.try_charge(1)) {
        out_of_budget = true;
        record.budget_cut = true;
        break;
      }
      const int j = selected[pos];
      coalition = coalition.with(j);
      const double v = game.value(coalition);
      const double h = v - v_prev;
      sums[level][static_cast<std::size_t>(j)] += h;
      ++visits[static_cast<std::size_t>(j)];
      ++visited;
      if (trace) record.increments.push_back(h);
      v_prev = v;
      if (cfg.eta > 0.0 && ceiling - v < cfg.eta) {
        record.truncated = pos + 1 < selected.size();
        break;
      }
    }
    // A walk refused before its first evaluation never happened.
    if (visited == 0 && !selected.empty()) break;
    ++walks[level];
    if (trace) trace->push_back(std::move(record));
  }

  std::vector<double> estimate(un, 0.0);
  if (cfg.mode == OwenNormalization::kPaper) {
    int active_levels = 0;
    for (std::size_t l = 0; l < levels; ++l) {
      if (walks[l] == 0) continue;
      ++active_levels;
      for (std::size_t j = 0; j < un; ++j) {
        estimate[j] += sums[l][j] / static_cast<double>(walks[l]);
      }
    }
    if (active_levels > 0) {
      for (auto& e : estimate) e /= active_levels;
    }
  } else {
    for (std::size_t j = 0; j < un; ++j) {
      if (visits[j] == 0) continue;
      double total = 0.0;
      for (std::size_t l = 0; l < levels; ++l) total += sums[l][j];
      estimate[j] = total / static_cast<double>(visits[j]);
    }
  }
  return {std::move(estimate), "owen", budget.used() - used_before};
}

// Strict Owen --------------------------------------------------------------

namespace {

struct StrictLevel {
  std::vector<double> sums;
  std::int64_t masks = 0;
};

void strict_mask(const CoalitionalGame& game, int level, int levels,
                 std::int64_t index, std::uint64_t seed, OwenGrid grid,
                 StrictLevel& out) {
  const int n = game.players();
  CounterRng rng(seed, StreamTag::kStrictOwen, u32(level), u32(index));
  double q = 0.0;
  switch (grid) {
    case OwenGrid::kRightEndpoint:
      q = static_cast<double>(level + 1) / levels;
      break;
    case OwenGrid::kMidpoint:
      q = (level + 0.5) / levels;
      break;
    case OwenGrid::kStratified:
      q = (level + rng.uniform()) / levels;
      break;
  }
  std::uint64_t mask = 0;
  for (int j = 0; j < n; ++j) {
    if (rng.bernoulli(q)) mask |= std::uint64_t{1} << j;
  }
  const Coalition s(n, mask);
  const double v_s = game.value(s);
  for (int j = 0; j < n; ++j) {
    const std::uint64_t bit = std::uint64_t{1} << j;
    const double v_twin = game.value(Coalition(n, mask ^ bit));
    out.sums[static_cast<std::size_t>(j)] +=
        (mask & bit) ? v_s - v_twin : v_twin - v_s;
  }
  ++out.masks;
}

}  // namespace

ContributionVector owen_strict(const CoalitionalGame& game, int levels,
                               int draws, std::uint64_t seed, OwenGrid grid,
                               BudgetMeter* budget, unsigned threads) {
  require(levels >= 1, "owen_strict: Q must be >= 1");
  require(draws >= 1, "owen_strict: M must be >= 1");
  require_players(game);
  if (game.players() == 1) return single_player(game, "owen-strict");

  const int n = game.players();
  const auto ulevels = static_cast<std::size_t>(levels);
  std::vector<StrictLevel> per_level(ulevels);
  for (auto& l : per_level) l.sums.assign(static_cast<std::size_t>(n), 0.0);

  std::int64_t evals = 0;
  if (budget == nullptr) {
    parallel_for(ulevels, threads, [&](std::size_t l) {
      for (std::int64_t m = 0; m < draws; ++m) {
        strict_mask(game, static_cast<int>(l), levels, m, seed, grid,
                    per_level[l]);
      }
    });
    evals = static_cast<std::int64_t>(levels) * draws * (n + 1);
  } else {
    const std::int64_t before = budget->used();
    bool done = false;
    for (std::int64_t m = 0; m < draws && !done; ++m) {
      for (int l = 0; l < levels; ++l) {
        if (!budget->try_charge(n + 1)) {
          done = true;
          break;
        }
        strict_mask(game, l, levels, m, seed, grid,
                    per_level[static_cast<std::size_t>(l)]);
      }
    }
    evals = budget->used() - before;
  }

  std::vector<double> estimate(static_cast<std::size_t>(n), 0.0);
  int active = 0;
  for (const auto& l : per_level) {
    if (l.masks == 0) continue;
    ++active;
    for (std::size_t j = 0; j < estimate.size(); ++j) {
      estimate[j] += l.sums[j] / static_cast<double>(l.masks);
    }
  }
  if (active > 0) {
    for (auto& e : estimate) e /= active;
  }
  return {std::move(estimate), "owen-strict", evals};
}

// Permutation estimators -----------------------------------------------------

ContributionVector mc_shapley(const CoalitionalGame& game, int permutations,
                              BudgetMeter& budget, std::uint64_t seed) {
  require(permutations >= 1, "mc_shapley: M must be >= 1");
  require_players(game);
  if (game.players() == 1) return single_player(game, "mc");

  const int n = game.players();
  const double v_empty = game.value(Coalition::empty(n));
  const std::int64_t before = budget.used();
  std::vector<double> phi(static_cast<std::size_t>(n), 0.0);
  std::int64_t completed = 0;
  for (std::int64_t m = 0; m < permutations; ++m) {
    if (!budget.try_charge(n)) break;
    CounterRng rng(seed, StreamTag::kPermutation, 0, u32(m));
    const std::vector<int> perm = random_permutation(n, rng);
    Coalition s(n);
    double v_prev = v_empty;
    for (int i : perm) {
      s = s.with(i);
      const double v = game.value(s);
      phi[static_cast<std::size_t>(i)] += v - v_prev;
      v_prev = v;
    }
    ++completed;
  }
  return {divide(std::move(phi), completed), "mc", budget.used() - before};
}

std::vector<double> gtg_marginals(const CoalitionalGame& game,
                                  std::span<const int> order, double eps) {
  const int n = game.players();
  const double v_full = game.value(Coalition::full(n));
  double v_prev = game.value(Coalition::empty(n));
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  Coalition s(n);
  for (int i : order) {
    const double v_curr =
        std::abs(v_full - v_prev) >= eps ? game.value(s.with(i)) : v_prev;
    out[static_cast<std::size_t>(i)] += v_curr - v_prev;
    v_prev = v_curr;
    s = s.with(i);
  }
  return out;
}

ContributionVector gtg_shapley(const CoalitionalGame& game, double eps,
                               int permutations, BudgetMeter& budget,
                               std::uint64_t seed) {
  require(eps >= 0.0, "gtg_shapley: eps must be >= 0");
  require(permutations >= 1, "gtg_shapley: M must be >= 1");
  require_players(game);
  if (game.players() == 1) return single_player(game, "gtg");

  const int n = game.players();
  const auto un = static_cast<std::size_t>(n);
  const double v_full = game.value(Coalition::full(n));
  const double v_empty = game.value(Coalition::empty(n));
  const std::int64_t before = budget.used();
  std::vector<double> phi(un, 0.0);
  std::vector<double> pass(un);
  std::int64_t completed = 0;
  bool out_of_budget = false;
  for (std::int64_t m = 0; m < permutations && !out_of_budget; ++m) {
    CounterRng rng(seed, StreamTag::kPermutation, 0, u32(m));
    const std::vector<int> perm = random_permutation(n, rng);
    Coalition s(n);
    double v_prev = v_empty;
    for (int i : perm) {
      double v_curr = v_prev;
      if (std::abs(v_full - v_prev) >= eps) {
        if (!budget.try_charge(1)) {
          out_of_budget = true;
          break;
        }
        v_curr = game.value(s.with(i));
      }
      pass[static_cast<std::size_t>(i)] = v_curr - v_prev;
      v_prev = v_curr;
      s = s.with(i);
    }
    if (out_of_budget) break;  // partial permutation is dropped
    for (std::size_t i = 0; i < un; ++i) phi[i] += pass[i];
    ++completed;
  }
  return {divide(std::move(phi), completed), "gtg", budget.used() - before};
}

ContributionVector data_banzhaf(const CoalitionalGame& game, int samples,
                                BudgetMeter& budget, std::uint64_t seed) {
  require(samples >= 1, "data_banzhaf: M must be >= 1");
  require_players(game);
  if (game.players() == 1) return single_player(game, "banzhaf");

  const int n = game.players();
  const double v_empty = game.value(Coalition::empty(n));
  const std::int64_t before = budget.used();
  std::vector<double> beta(static_cast<std::size_t>(n), 0.0);
  std::int64_t completed = 0;
  for (std::int64_t m = 0; m < samples; ++m) {
    CounterRng rng(seed, StreamTag::kBanzhafSubset, 0, u32(m));
    const Coalition s(n, rng() & low_bits(n));
    const std::int64_t cost = (s.is_empty() ? 0 : 1) + (n - s.size());
    if (!budget.try_charge(cost)) break;
    const double v_s = s.is_empty() ? v_empty : game.value(s);
    for (int i = 0; i < n; ++i) {
      if (s.contains(i)) continue;
      beta[static_cast<std::size_t>(i)] += game.value(s.with(i)) - v_s;
    }
    ++completed;
  }
  return {divide(std::move(beta), completed), "banzhaf",
          budget.used() - before};
}

std::vector<double> beta_position_weights(int n, double alpha, double beta) {
  require(n >= 1, "beta_position_weights: n must be >= 1");
  require(alpha > 0.0 && beta > 0.0,
          "beta_position_weights: alpha and beta must be > 0");
  std::vector<double> w(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double x = (j - 0.5) / n;
    // The Beta normalizing constant cancels in the mean-1 rescaling.
    const double raw = std::pow(x, alpha - 1.0) * std::pow(1.0 - x, beta - 1.0);
    w[static_cast<std::size_t>(j - 1)] = raw;
    total += raw;
  }
  const double mean = total / n;
  for (auto& x : w) x /= mean;
  return w;
}

ContributionVector weighted_shap(const CoalitionalGame& game, double alpha,
                                 double beta, int permutations,
                                 BudgetMeter& budget, std::uint64_t seed) {
  require(permutations >= 1, "weighted_shap: M must be >= 1");
  require_players(game);
  const std::vector<double> weights =
      beta_position_weights(game.players(), alpha, beta);
  if (game.players() == 1) return single_player(game, "wshap");

  const int n = game.players();
  const double v_empty = game.value(Coalition::empty(n));
  const std::int64_t before = budget.used();
  std::vector<double> phi(static_cast<std::size_t>(n), 0.0);
  std::int64_t completed = 0;
  for (std::int64_t m = 0; m < permutations; ++m) {
    if (!budget.try_charge(n)) break;
    CounterRng rng(seed, StreamTag::kPermutation, 0, u32(m));
    const std::vector<int> perm = random_permutation(n, rng);
    Coalition s(n);
    double v_prev = v_empty;
    for (std::size_t pos = 0; pos < perm.size(); ++pos) {
      const int i = perm[pos];
      s = s.with(i);
      const double v = game.value(s);
      phi[static_cast<std::size_t>(i)] += weights[pos] * (v - v_prev);
      v_prev = v;
    }
    ++completed;
  }
  return {divide(std::move(phi), completed), "wshap", budget.used() - before};
}

// Registry -----------------------------------------------------------------

const std::vector<std::string>& estimator_ids() {
  static const std::vector<std::string> ids = {
      "owen", "owen-strict", "mc", "gtg", "banzhaf", "wshap"};
  return ids;
}

bool is_estimator_id(std::string_view id) {
  const auto& ids = estimator_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

ContributionVector run_estimator(const NormalizedGame& game,
                                 const EstimatorSpec& spec,
                                 BudgetMeter& budget) {
  if (spec.id == "owen") {
    OwenConfig cfg{spec.levels, spec.draws, spec.eta, spec.mode, spec.seed};
    return owen_walk(game, cfg, budget);
  }
  const CoalitionalGame g = game.as_game();
  if (spec.id == "owen-strict") {
    return owen_strict(g, spec.levels, std::numeric_limits<int>::max(),
                       spec.seed, spec.grid, &budget);
  }
  if (spec.id == "mc") return mc_shapley(g, spec.draws, budget, spec.seed);
  if (spec.id == "gtg") {
    return gtg_shapley(g, spec.gtg_eps, spec.draws, budget, spec.seed);
  }
  if (spec.id == "banzhaf") {
    return data_banzhaf(g, spec.draws, budget, spec.seed);
  }
  if (spec.id == "wshap") {
    return weighted_shap(g, spec.wshap_alpha, spec.wshap_beta, spec.draws,
                         budget, spec.seed);
  }
  throw InvalidArgument("unknown estimator '" + spec.id + "'");
}

OwenNormalization parse_owen_mode(std::string_view text) {
  if (text == "paper") return OwenNormalization::kPaper;
  if (text == "visited") return OwenNormalization::kVisited;
  throw InvalidArgument("unknown owen mode '" + std::string(text) +
                        "' (expected paper|visited)");
}

std::string_view to_string(OwenNormalization mode) {
  return mode == OwenNormalization::kPaper ? "paper" : "visited";
}

OwenGrid parse_owen_grid(std::string_view text) {
  if (text == "right") return OwenGrid::kRightEndpoint;
  if (text == "midpoint") return OwenGrid::kMidpoint;
  if (text == "stratified") return OwenGrid::kStratified;
  throw InvalidArgument("unknown owen grid '" + std::string(text) +
                        "' (expected right|midpoint|stratified)");
}

std::string_view to_string(OwenGrid grid) {
  switch (grid) {
    case OwenGrid::kRightEndpoint:
      return "right";
    case OwenGrid::kMidpoint:
      return "midpoint";
    case OwenGrid::kStratified:
      break;
  }
  return "stratified";
}

}  // namespace fedowen
