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
#include <vector>

#include "fedowen/rng.hpp"

namespace fedowen {

/// Selection counters for the epsilon-greedy bandit.
struct BanditState {
  std::vector<std::int64_t> sigma;  // times each client was selected
  std::int64_t t = 0;               // round index, advanced by the caller

  explicit BanditState(std::size_t clients = 0) : sigma(clients, 0) {}
};

struct SelectionConfig {
  double epsilon = 0.1;
  double c = 0.1;       // confidence weight
  double tau = 0.0;     // contribution floor
  int k = 10;           // clients per round
  static constexpr double kLowGainScale = 0.1;
};

/// s_i = g_i + u_i with g_i = phi_i if phi_i >= tau else 0, and
/// u_i = c * sqrt(ln(t + 1) / (sigma_i + 1)), damped by 0.1 below the floor.
double score(double phi, std::int64_t sigma, std::int64_t t,
             const SelectionConfig& cfg);

/// Exploitation-branch probabilities: scores shifted by their minimum and
/// normalized, or uniform when every shifted score is zero.
std::vector<double> selection_weights(std::span<const double> phi,
                                      const BanditState& state,
                                      const SelectionConfig& cfg);

/// k distinct indices by sequential draw-remove-renormalize.
/// Throws when fewer than k weights are positive.
std::vector<int> weighted_sample_without_replacement(
    std::span<const double> weights, int k, CounterRng& rng);

/// k distinct indices, uniformly.
std::vector<int> uniform_sample_without_replacement(int n, int k,
                                                    CounterRng& rng);

struct SelectionOutcome {
  std::vector<int> selected;   // in draw order
  bool explored = false;
  std::vector<double> weights;  // empty when explored
};

/// One round of hybrid selection. With probability epsilon the whole batch
/// is uniform; otherwise it is drawn by `selection_weights`. sigma is
/// incremented for the selected clients in both branches; t is not touched.
SelectionOutcome select_clients(std::span<const double> phi,
                                BanditState& state,
                                const SelectionConfig& cfg, CounterRng& rng);

}  // namespace fedowen
