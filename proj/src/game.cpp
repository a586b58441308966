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

#include "fedowen/game.hpp"

#include <algorithm>
#include <cmath>

#include "fedowen/error.hpp"
#include "fedowen/rng.hpp"

namespace fedowen {

CoalitionalGame::CoalitionalGame(int n, Utility utility, std::string name)
    : n_(n),
      utility_(std::move(utility)),
      name_(std::move(name)),
      counter_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
  if (n < 0 || n > kMaxPlayers) {
    throw InvalidArgument("game player count must be in [0, 64]");
  }
  if (!utility_) throw InvalidArgument("game utility is empty");
}

double CoalitionalGame::value(Coalition s) const {
  if (s.players() != n_) {
    throw InvalidArgument("coalition over " + std::to_string(s.players()) +
                          " players passed to a " + std::to_string(n_) +
                          "-player game");
  }
  counter_->fetch_add(1, std::memory_order_relaxed);
  return utility_(s);
}

// NormalizedGame ----------------------------------------------------------

NormalizedGame::NormalizedGame(CoalitionalGame inner, double v_empty,
                               double v_full, double scale, double ceiling,
                               bool unit)
    : inner_(std::move(inner)),
      v_empty_(v_empty),
      v_full_(v_full),
      scale_(scale),
      ceiling_(ceiling),
      unit_(unit) {}

double NormalizedGame::value(Coalition s) const {
  return (inner_.value(s) - v_empty_) / scale_;
}

CoalitionalGame NormalizedGame::as_game() const {
  NormalizedGame self = *this;
  return CoalitionalGame(
      players(), [self](Coalition s) { return self.value(s); },
      inner_.name() + "/normalized");
}

NormalizedGame normalize(const CoalitionalGame& game) {
  const int n = game.players();
  const double v_empty = game.value(Coalition::empty(n));
  const double v_full = game.value(Coalition::full(n));
  const double span = v_full - v_empty;
  if (span == 0.0 || !std::isfinite(span)) {
    throw InvalidArgument("cannot normalize game '" + game.name() +
                          "': v(N) == v(empty)");
  }
  return NormalizedGame(game, v_empty, v_full, span, 1.0, true);
}

NormalizedGame shift_only(const CoalitionalGame& game, double utility_max) {
  const int n = game.players();
  const double v_empty = game.value(Coalition::empty(n));
  const double v_full = game.value(Coalition::full(n));
  return NormalizedGame(game, v_empty, v_full, 1.0, utility_max - v_empty,
                        false);
}

// Exact oracles ------------------------------------------------------------

namespace {

void check_exact_size(const CoalitionalGame& game) {
  if (game.players() > kMaxExactPlayers) {
    throw InvalidArgument("exact oracle limited to " +
                          std::to_string(kMaxExactPlayers) + " players, got " +
                          std::to_string(game.players()));
  }
}

}  // namespace

std::vector<double> tabulate(const CoalitionalGame& game) {
  check_exact_size(game);
  const int n = game.players();
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> table(count);
  for (std::uint64_t m = 0; m < count; ++m) {
    table[m] = game.value(Coalition(n, m));
  }
  return table;
}

ContributionVector exact_shapley(const CoalitionalGame& game) {
  const int n = game.players();
  const std::vector<double> table = tabulate(game);

  // weight[s] = s! (n - s - 1)! / n! = 1 / (n * C(n-1, s))
  std::vector<double> weight(static_cast<std::size_t>(std::max(n, 1)));
  double binom = 1.0;
  for (int s = 0; s < n; ++s) {
    weight[static_cast<std::size_t>(s)] = 1.0 / (n * binom);
    binom = binom * (n - 1 - s) / (s + 1);
  }

  std::vector<double> phi(static_cast<std::size_t>(n), 0.0);
  for (std::uint64_t m = 0; m < table.size(); ++m) {
    const double w = weight[static_cast<std::size_t>(std::popcount(m))];
    for (int i = 0; i < n; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (m & bit) continue;
      phi[static_cast<std::size_t>(i)] += w * (table[m | bit] - table[m]);
    }
  }
  return {std::move(phi), "exact-shapley",
          static_cast<std::int64_t>(table.size())};
}

ContributionVector exact_banzhaf(const CoalitionalGame& game) {
  const int n = game.players();
  const std::vector<double> table = tabulate(game);
  std::vector<double> beta(static_cast<std::size_t>(n), 0.0);
  for (std::uint64_t m = 0; m < table.size(); ++m) {
    for (int i = 0; i < n; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (m & bit) continue;
      beta[static_cast<std::size_t>(i)] += table[m | bit] - table[m];
    }
  }
  if (n > 0) {
    const double denom = std::ldexp(1.0, n - 1);
    for (auto& b : beta) b /= denom;
  }
  return {std::move(beta), "exact-banzhaf",
          static_cast<std::int64_t>(table.size())};
}

// Catalog ------------------------------------------------------------------

namespace {

constexpr int kTabulateUpTo = 16;

CoalitionalGame maybe_tabulated(int n, CoalitionalGame::Utility f,
                                std::string name) {
  if (n > kTabulateUpTo) return CoalitionalGame(n, std::move(f), name);
  const std::uint64_t count = std::uint64_t{1} << n;
  auto table = std::make_shared<std::vector<double>>(count);
  for (std::uint64_t m = 0; m < count; ++m) (*table)[m] = f(Coalition(n, m));
  return CoalitionalGame(
      n, [table](Coalition s) { return (*table)[s.mask()]; }, std::move(name));
}

void check_n(int n) {
  if (n < 1 || n > kMaxPlayers) {
    throw InvalidArgument("player count must be in [1, 64], got " +
                          std::to_string(n));
  }
}

}  // namespace

CoalitionalGame additive_game(std::vector<double> weights) {
  const int n = static_cast<int>(weights.size());
  check_n(n);
  return CoalitionalGame(
      n,
      [w = std::move(weights)](Coalition s) {
        double total = 0.0;
        for (std::uint64_t m = s.mask(); m != 0; m &= m - 1) {
          total += w[static_cast<std::size_t>(std::countr_zero(m))];
        }
        return total;
      },
      "additive");
}

CoalitionalGame majority_game(int n, int quota) {
  check_n(n);
  if (quota < 0) quota = n / 2 + 1;
  return CoalitionalGame(
      n, [quota](Coalition s) { return s.size() >= quota ? 1.0 : 0.0; },
      "majority");
}

CoalitionalGame glove_game(int n, std::uint64_t left, std::uint64_t right) {
  check_n(n);
  if ((left & right) != 0 || ((left | right) & ~low_bits(n)) != 0) {
    throw InvalidArgument("glove sides must be disjoint subsets of players");
  }
  return CoalitionalGame(
      n,
      [left, right](Coalition s) {
        return static_cast<double>(std::min(std::popcount(s.mask() & left),
                                            std::popcount(s.mask() & right)));
      },
      "glove");
}

CoalitionalGame random_monotone_game(int n, std::uint64_t seed) {
  check_n(n);
  CounterRng rng(seed, StreamTag::kGameParams, static_cast<std::uint32_t>(n),
                 1);
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> single(un);
  for (auto& w : single) w = 0.05 + 0.95 * rng.uniform();
  std::vector<double> pair(un * un, 0.0);
  for (std::size_t i = 0; i < un; ++i) {
    for (std::size_t j = i + 1; j < un; ++j) {
      pair[i * un + j] = rng.uniform() / n;
    }
  }
  auto f = [un, single = std::move(single), pair = std::move(pair)](
               Coalition s) {
    const std::vector<int> members = s.members();
    double total = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a) {
      const auto i = static_cast<std::size_t>(members[a]);
      total += single[i];
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        total += pair[i * un + static_cast<std::size_t>(members[b])];
      }
    }
    return total;
  };
  return maybe_tabulated(n, std::move(f), "random_monotone");
}

CoalitionalGame saturating_game(int n, std::uint64_t seed) {
  check_n(n);
  CounterRng rng(seed, StreamTag::kGameParams, static_cast<std::uint32_t>(n),
                 2);
  std::vector<double> p(static_cast<std::size_t>(n));
  for (auto& x : p) x = 0.05 + 0.45 * rng.uniform();
  auto f = [p = std::move(p)](Coalition s) {
    double miss = 1.0;
    for (std::uint64_t m = s.mask(); m != 0; m &= m - 1) {
      miss *= 1.0 - p[static_cast<std::size_t>(std::countr_zero(m))];
    }
    return 1.0 - miss;
  };
  return maybe_tabulated(n, std::move(f), "saturating");
}

CoalitionalGame table_game(int n, std::vector<double> values,
                           std::string name) {
  check_n(n);
  if (n > kMaxExactPlayers || values.size() != (std::size_t{1} << n)) {
    throw InvalidArgument("table game needs exactly 2^n values");
  }
  return CoalitionalGame(
      n, [v = std::move(values)](Coalition s) { return v[s.mask()]; },
      std::move(name));
}

CoalitionalGame sum_game(const CoalitionalGame& v, const CoalitionalGame& w) {
  if (v.players() != w.players()) {
    throw InvalidArgument("sum_game: player counts differ");
  }
  return CoalitionalGame(
      v.players(), [v, w](Coalition s) { return v.value(s) + w.value(s); },
      v.name() + "+" + w.name());
}

const std::vector<std::string>& standard_game_names() {
  static const std::vector<std::string> names = {
      "additive", "majority", "glove", "random_monotone", "saturating"};
  return names;
}

CoalitionalGame standard_game(std::string_view name, int n,
                              std::uint64_t seed) {
  if (name == "additive") {
    check_n(n);
    CounterRng rng(seed, StreamTag::kGameParams, static_cast<std::uint32_t>(n),
                   0);
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = rng.uniform();
    return additive_game(std::move(w));
  }
  if (name == "majority") return majority_game(n);
  if (name == "glove") {
    check_n(n);
    const int left = (n + 1) / 2;
    return glove_game(n, low_bits(left), low_bits(n) & ~low_bits(left));
  }
  if (name == "random_monotone") return random_monotone_game(n, seed);
  if (name == "saturating") return saturating_game(n, seed);
  throw InvalidArgument("unknown game '" + std::string(name) + "'");
}

}  // namespace fedowen
