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

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fedowen/coalition.hpp"

namespace fedowen {

/// Per-player contribution scores with estimator id and calls spent.
struct ContributionVector {
  std::vector<double> values;
  std::string estimator_id;
  std::int64_t evals_used = 0;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// A transferable-utility game on `n` players.
///
/// Copies share the evaluation counter, so a game handed to an estimator
/// by value still reports the calls made through it. The counter is atomic
/// and may be bumped from several evaluator threads.
class CoalitionalGame {
 public:
  using Utility = std::function<double(Coalition)>;

  CoalitionalGame(int n, Utility utility, std::string name = "game");

  int players() const noexcept { return n_; }
  const std::string& name() const noexcept { return name_; }

  /// Evaluates the utility and counts the call.
  double value(Coalition s) const;
  double operator()(Coalition s) const { return value(s); }

  std::uint64_t eval_count() const noexcept {
    return counter_->load(std::memory_order_relaxed);
  }
  void reset_eval_count() noexcept { counter_->store(0); }

 private:
  int n_;
  Utility utility_;
  std::string name_;
  std::shared_ptr<std::atomic<std::uint64_t>> counter_;
};

/// v'(S) = (v(S) - offset) / scale.
///
/// Built by `normalize` (v'(empty) = 0, v'(N) = 1) or by `shift_only` for
/// games whose grand coalition does not improve on the empty one.
/// `ceiling()` is the largest value v' can reach; walk truncation uses it
/// as the optimistic upper bound on the remaining gain.
class NormalizedGame {
 public:
  const CoalitionalGame& inner() const noexcept { return inner_; }
  int players() const noexcept { return inner_.players(); }
  double v_empty() const noexcept { return v_empty_; }
  double v_full() const noexcept { return v_full_; }
  double scale() const noexcept { return scale_; }
  double ceiling() const noexcept { return ceiling_; }
  bool is_unit_normalized() const noexcept { return unit_; }

  double value(Coalition s) const;
  double operator()(Coalition s) const { return value(s); }

  /// The normalized utility as a plain game (shares the inner counter).
  CoalitionalGame as_game() const;

  friend NormalizedGame normalize(const CoalitionalGame& game);
  friend NormalizedGame shift_only(const CoalitionalGame& game,
                                   double utility_max);

 private:
  NormalizedGame(CoalitionalGame inner, double v_empty, double v_full,
                 double scale, double ceiling, bool unit);

  CoalitionalGame inner_;
  double v_empty_;
  double v_full_;
  double scale_;
  double ceiling_;
  bool unit_;
};

/// Rescales so that v'(empty) = 0 and v'(N) = 1. Throws when v(N) == v(empty).
NormalizedGame normalize(const CoalitionalGame& game);

/// v'(S) = v(S) - v(empty), with ceiling utility_max - v(empty). Used when
/// v(N) <= v(empty) and unit normalization would be undefined or flip signs.
NormalizedGame shift_only(const CoalitionalGame& game, double utility_max);

inline constexpr int kMaxExactPlayers = 20;

/// Exact Shapley value by evaluating all 2^n coalitions once.
ContributionVector exact_shapley(const CoalitionalGame& game);

/// Exact (unnormalized-probability) Banzhaf value
/// beta_i = 2^-(n-1) * sum over S not containing i of v(S+i) - v(S).
ContributionVector exact_banzhaf(const CoalitionalGame& game);

/// Memoized utility table indexed by coalition mask. Exactly 2^n calls.
std::vector<double> tabulate(const CoalitionalGame& game);

// Test-game catalog -------------------------------------------------------

CoalitionalGame additive_game(std::vector<double> weights);
/// v(S) = 1 iff |S| >= quota; quota defaults to floor(n/2) + 1.
CoalitionalGame majority_game(int n, int quota = -1);
/// v(S) = min(|S & left|, |S & right|).
CoalitionalGame glove_game(int n, std::uint64_t left, std::uint64_t right);
/// Positive singleton weights plus non-negative pairwise synergies, so the
/// game is monotone and supermodular.
CoalitionalGame random_monotone_game(int n, std::uint64_t seed);
/// v(S) = 1 - prod_{i in S} (1 - p_i): monotone with diminishing returns,
/// the shape accuracy curves tend to have.
CoalitionalGame saturating_game(int n, std::uint64_t seed);
/// Arbitrary game given by its full table (size 2^n).
CoalitionalGame table_game(int n, std::vector<double> values,
                           std::string name = "table");
/// Pointwise sum v + w of two games on the same players.
CoalitionalGame sum_game(const CoalitionalGame& v, const CoalitionalGame& w);

/// Names accepted by `standard_game`.
const std::vector<std::string>& standard_game_names();

/// Factory over the catalog: "additive", "majority", "glove",
/// "random_monotone", "saturating". Additive weights and glove sides are
/// derived from `seed` (glove: first half left, rest right).
CoalitionalGame standard_game(std::string_view name, int n,
                              std::uint64_t seed = 0);

}  // namespace fedowen
