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

#include "fedowen/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fedowen/error.hpp"

namespace fedowen {

double score(double phi, std::int64_t sigma, std::int64_t t,
             const SelectionConfig& cfg) {
  if (sigma < 0 || t < 0) {
    throw InvalidArgument("score: sigma and t must be non-negative");
  }
  const bool below_floor = phi < cfg.tau;
  const double gain = below_floor ? 0.0 : phi;
  double bonus = cfg.c * std::sqrt(std::log(static_cast<double>(t) + 1.0) /
                                   (static_cast<double>(sigma) + 1.0));
  if (below_floor) bonus *= SelectionConfig::kLowGainScale;
  return gain + bonus;
}

std::vector<double> selection_weights(std::span<const double> phi,
                                      const BanditState& state,
                                      const SelectionConfig& cfg) {
  if (phi.size() != state.sigma.size()) {
    throw InvalidArgument("selection_weights: phi and sigma sizes differ");
  }
  if (phi.empty()) return {};
  std::vector<double> s(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    s[i] = score(phi[i], state.sigma[i], state.t, cfg);
  }
  const double lowest = *std::min_element(s.begin(), s.end());
  double total = 0.0;
  for (auto& x : s) {
    x -= lowest;
    total += x;
  }
  if (total == 0.0 || !std::isfinite(total)) {
    std::fill(s.begin(), s.end(), 1.0 / static_cast<double>(s.size()));
  } else {
    for (auto& x : s) x /= total;
  }
  return s;
}

std::vector<int> weighted_sample_without_replacement(
    std::span<const double> weights, int k, CounterRng& rng) {
  if (k < 0) throw InvalidArgument("sample size must be non-negative");
  const auto positive = std::count_if(weights.begin(), weights.end(),
                                      [](double w) { return w > 0.0; });
  if (positive < k) {
    throw InvalidArgument("cannot draw " + std::to_string(k) +
                          " clients from " + std::to_string(positive) +
                          " positive weights");
  }
  std::vector<double> w(weights.begin(), weights.end());
  for (double x : w) {
    if (x < 0.0 || !std::isfinite(x)) {
      throw InvalidArgument("weights must be finite and non-negative");
    }
  }
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int draw = 0; draw < k; ++draw) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    const double target = rng.uniform() * total;
    double running = 0.0;
    std::size_t pick = w.size();
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] <= 0.0) continue;
      last_positive = i;
      running += w[i];
      if (target < running) {
        pick = i;
        break;
      }
    }
    if (pick == w.size()) pick = last_positive;  // rounding at the top end
    out.push_back(static_cast<int>(pick));
    w[pick] = 0.0;
  }
  return out;
}

std::vector<int> uniform_sample_without_replacement(int n, int k,
                                                    CounterRng& rng) {
  if (k < 0 || k > n) {
    throw InvalidArgument("cannot draw " + std::to_string(k) + " of " +
                          std::to_string(n) + " clients");
  }
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  // Partial Fisher-Yates: the first k slots are the sample.
  for (int i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(
        i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i))));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

SelectionOutcome select_clients(std::span<const double> phi,
                                BanditState& state,
                                const SelectionConfig& cfg, CounterRng& rng) {
  const int n = static_cast<int>(phi.size());
  if (cfg.k > n) {
    throw InvalidArgument("cannot select k=" + std::to_string(cfg.k) +
                          " from " + std::to_string(n) + " clients");
  }
  if (cfg.epsilon < 0.0 || cfg.epsilon > 1.0) {
    throw InvalidArgument("epsilon must be in [0, 1]");
  }
  SelectionOutcome out;
  if (rng.uniform() < cfg.epsilon) {
    out.explored = true;
    out.selected = uniform_sample_without_replacement(n, cfg.k, rng);
  } else {
    out.weights = selection_weights(phi, state, cfg);
    const auto positive =
        std::count_if(out.weights.begin(), out.weights.end(),
                      [](double w) { return w > 0.0; });
    if (positive < cfg.k) {
      // Fewer positive weights than slots: the zero-weight clients fill the
      // remaining slots uniformly after the positive ones are drawn.
      out.selected = weighted_sample_without_replacement(
          out.weights, static_cast<int>(positive), rng);
      std::vector<double> rest(out.weights.size(), 1.0);
      for (int i : out.selected) rest[static_cast<std::size_t>(i)] = 0.0;
      const auto more = weighted_sample_without_replacement(
          rest, cfg.k - static_cast<int>(positive), rng);
      out.selected.insert(out.selected.end(), more.begin(), more.end());
    } else {
      out.selected = weighted_sample_without_replacement(out.weights, cfg.k, rng);
    }
  }
  for (int i : out.selected) ++state.sigma[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace fedowen
