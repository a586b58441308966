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
#include <utility>
#include <vector>

namespace fedowen {

/// Dense labelled examples. Row i is features[i*dim, (i+1)*dim).
///
/// `ids` carries each example's index in the dataset it was first generated
/// or loaded as, so splits and shards can be checked for overlap.
struct Dataset {
  int dim = 0;
  int classes = 0;
  std::vector<double> features;
  std::vector<int> labels;
  std::vector<std::int64_t> ids;

  std::size_t size() const noexcept { return labels.size(); }
  bool empty() const noexcept { return labels.empty(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(features).subspan(
        i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
  }
  /// Rows `indices` (into this dataset), in that order.
  Dataset subset(std::span<const std::size_t> indices) const;
  std::vector<std::int64_t> class_counts() const;
  /// Throws unless labels are in [0, classes) and sizes agree.
  void validate() const;
};

struct BlobSpec {
  int classes = 10;
  int examples = 6000;
  int dim = 20;
  double separation = 0.35;  // std-dev of class means per coordinate
  std::uint64_t seed = 0;
};

/// Gaussian blobs: class means ~ N(0, separation^2 I), unit-variance noise,
/// examples spread over classes round-robin (equal counts up to one).
Dataset make_blobs(const BlobSpec& spec);

/// Target per-class sizes after an exponential long-tail:
/// n_c = min(count_c, round(n_max * imb^(c / (C - 1)))).
std::vector<std::int64_t> longtail_counts(std::span<const std::int64_t> counts,
                                          double imbalance);

/// Subsamples each class uniformly without replacement to longtail_counts.
Dataset apply_longtail(const Dataset& data, double imbalance,
                       std::uint64_t seed);

/// Stratified (train, eval) split; eval holds round(fraction * N) examples
/// allotted to classes by largest remainder.
std::pair<Dataset, Dataset> split_eval_set(const Dataset& data,
                                           double fraction,
                                           std::uint64_t seed);

struct PartitionSpec {
  int n_clients = 100;
  double dirichlet_alpha = 0.1;
  std::uint64_t seed = 0;
  int max_redraws = 100;
};

/// Per-class Dirichlet split. Returns for each client the row indices (into
/// `data`) it owns. Every client gets at least one example: a draw with an
/// empty client is redrawn up to max_redraws times, after which single
/// examples are moved from the largest shards into the empty ones.
std::vector<std::vector<std::size_t>> dirichlet_partition(
    const Dataset& data, const PartitionSpec& spec);

/// Largest-remainder apportionment of `total` items by `shares`.
std::vector<std::int64_t> apportion(std::span<const double> shares,
                                    std::int64_t total);

/// Shannon entropy (nats) of the label histogram of `rows`.
double label_entropy(const Dataset& data, std::span<const std::size_t> rows);

}  // namespace fedowen
