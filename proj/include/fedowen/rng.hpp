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

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace fedowen {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// What a random stream is used for. Part of the counter, so streams with
/// different purposes never overlap even under the same seed.
enum class StreamTag : std::uint32_t {
  kPermutation = 1,
  kOwenMask = 2,
  kBanzhafSubset = 3,
  kStrictOwen = 4,
  kSelection = 5,
  kPartition = 6,
  kTraining = 7,
  kDataset = 8,
  kEvalSplit = 9,
  kModelInit = 10,
  kLongTail = 11,
  kGameParams = 12,
  kValuation = 13,
};

/// Counter-based generator addressed by (seed, tag, a, b).
///
/// Two generators built from the same address produce the same sequence,
/// whatever thread or order they are created in. `a` and `b` are free
/// coordinates, e.g. (level, walk index) or (round, client id).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, StreamTag tag, std::uint32_t a = 0,
             std::uint32_t b = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }
  /// Standard normal via Box-Muller.
  double normal();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int next_word_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Fisher-Yates shuffle driven by `rng.below`, identical on every platform.
void shuffle(std::span<int> items, CounterRng& rng);

/// Random permutation of 0..n-1.
std::vector<int> random_permutation(int n, CounterRng& rng);

/// log of a Gamma(shape, 1) variate. Working in log space keeps tiny
/// shapes (Dirichlet alpha = 0.01) from underflowing to zero.
double log_gamma_variate(double shape, CounterRng& rng);

/// Symmetric Dirichlet(alpha, ..., alpha) draw of dimension k.
std::vector<double> dirichlet(double alpha, int k, CounterRng& rng);

}  // namespace fedowen
