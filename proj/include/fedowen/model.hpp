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

#include "fedowen/aggregation.hpp"
#include "fedowen/dataset.hpp"
#include "fedowen/rng.hpp"

namespace fedowen {

enum class Architecture {
  kLogistic,  // softmax regression: W (C x d), b (C)
  kMlp,       // tanh hidden layer: W1 (H x d), b1 (H), W2 (C x H), b2 (C)
};

Architecture parse_architecture(std::string_view text);
std::string_view to_string(Architecture arch);

struct ModelSpec {
  Architecture arch = Architecture::kLogistic;
  int dim = 20;
  int classes = 10;
  int hidden = 32;

  std::vector<Segment> layout() const;
  /// Name of the output weight matrix (one row per class).
  std::string_view output_weights() const;
};

/// Small random initialization (Glorot-scaled normals, zero biases).
ModelParams init_model(const ModelSpec& spec, std::uint64_t seed);

/// Class scores for one example.
std::vector<double> logits(const ModelSpec& spec, const ModelParams& params,
                           std::span<const double> x);

int predict(const ModelSpec& spec, const ModelParams& params,
            std::span<const double> x);

/// Fraction of rows classified correctly; 0 for an empty dataset.
double accuracy(const ModelSpec& spec, const ModelParams& params,
                const Dataset& data);

/// Mean cross-entropy over `rows` of `data`. When `grad` is non-null it is
/// overwritten with the analytic gradient (same layout as params).
double loss_and_gradient(const ModelSpec& spec, const ModelParams& params,
                         const Dataset& data, std::span<const std::size_t> rows,
                         std::vector<double>* grad);

struct TrainConfig {
  int epochs = 1;
  double lr = 0.05;
  int batch = 16;
};

struct TrainResult {
  ModelParams params;
  bool empty_shard = false;
};

/// Mini-batch gradient descent on cross-entropy. The visiting order of
/// every epoch is a shuffle drawn from `rng`.
TrainResult local_train(const ModelSpec& spec, const ModelParams& params,
                        const Dataset& data, std::span<const std::size_t> shard,
                        const TrainConfig& cfg, CounterRng& rng);

}  // namespace fedowen
