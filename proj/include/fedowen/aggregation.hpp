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

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fedowen {

/// One named block of a flat parameter vector (a weight matrix or bias).
struct Segment {
  std::string name;
  int rows = 0;
  int cols = 0;

  std::size_t size() const {
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Flat parameter vector plus its layout.
struct ModelParams {
  std::vector<Segment> layout;
  std::vector<double> values;

  /// Offset of segment `name` in `values`; throws if absent.
  std::size_t offset(std::string_view name) const;
  const Segment& segment(std::string_view name) const;
  std::span<const double> view(std::string_view name) const;
  std::span<double> view(std::string_view name);

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

std::size_t layout_size(const std::vector<Segment>& layout);

/// alpha_i = exp(phi_i) / sum_j exp(phi_j), computed after subtracting max.
std::vector<double> softmax_weights(std::span<const double> phi);

/// sum_i alpha_i W_i. All models must share one layout.
ModelParams aggregate(std::span<const ModelParams> models,
                      std::span<const double> alpha);

/// aggregate with alpha_i = 1/k.
ModelParams fedavg_uniform(std::span<const ModelParams> models);

/// Cosine weights against `reference`, clipped at 0 and normalized;
/// uniform when every clipped cosine is 0. A zero-norm gradient scores 0.
std::vector<double> shapfed_wa_weights(
    std::span<const std::vector<double>> grads,
    std::span<const double> reference);

/// Same, with the reference set to the uniform mean of `grads`.
std::vector<double> shapfed_wa_weights(
    std::span<const std::vector<double>> grads);

/// Per-class variant: grads[i][c] is client i's gradient row for class c.
/// Each class is compared with the mean over clients of that class's rows,
/// and client i's score is its cosine averaged over classes.
std::vector<double> shapfed_wa_class_weights(
    std::span<const std::vector<std::vector<double>>> grads);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// "softmax-contrib", "fedavg", "shapfed-wa".
const std::vector<std::string>& aggregator_ids();
bool is_aggregator_id(std::string_view id);

}  // namespace fedowen
