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

#include "fedowen/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fedowen/error.hpp"
#include "fedowen/rng.hpp"

namespace fedowen {

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.dim = dim;
  out.classes = classes;
  out.features.reserve(indices.size() * static_cast<std::size_t>(dim));
  out.labels.reserve(indices.size());
  out.ids.reserve(indices.size());
  for (std::size_t i : indices) {
    const auto r = row(i);
    out.features.insert(out.features.end(), r.begin(), r.end());
    out.labels.push_back(labels[i]);
    out.ids.push_back(ids[i]);
  }
  return out;
}

std::vector<std::int64_t> Dataset::class_counts() const {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(classes), 0);
  for (int y : labels) ++counts[static_cast<std::size_t>(y)];
  return counts;
}

void Dataset::validate() const {
  if (dim <= 0 || classes <= 0) {
    throw InvalidArgument("dataset needs positive dim and class count");
  }
  if (features.size() != labels.size() * static_cast<std::size_t>(dim) ||
      ids.size() != labels.size()) {
    throw InvalidArgument("dataset feature/label/id sizes disagree");
  }
  for (int y : labels) {
    if (y < 0 || y >= classes) {
      throw InvalidArgument("label " + std::to_string(y) + " outside [0, " +
                            std::to_string(classes) + ")");
    }
  }
}

Dataset make_blobs(const BlobSpec& spec) {
  if (spec.classes < 1 || spec.examples < 1 || spec.dim < 1) {
    throw InvalidArgument("blob spec needs positive classes, examples, dim");
  }
  CounterRng mean_rng(spec.seed, StreamTag::kDataset, 0, 0);
  const auto d = static_cast<std::size_t>(spec.dim);
  std::vector<double> means(static_cast<std::size_t>(spec.classes) * d);
  for (auto& m : means) m = spec.separation * mean_rng.normal();

  CounterRng noise(spec.seed, StreamTag::kDataset, 1, 0);
  Dataset out;
  out.dim = spec.dim;
  out.classes = spec.classes;
  out.features.resize(static_cast<std::size_t>(spec.examples) * d);
  out.labels.resize(static_cast<std::size_t>(spec.examples));
  out.ids.resize(static_cast<std::size_t>(spec.examples));
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    const int y = static_cast<int>(i % static_cast<std::size_t>(spec.classes));
    out.labels[i] = y;
    out.ids[i] = static_cast<std::int64_t>(i);
    for (std::size_t k = 0; k < d; ++k) {
      out.features[i * d + k] =
          means[static_cast<std::size_t>(y) * d + k] + noise.normal();
    }
  }
  return out;
}

std::vector<std::int64_t> longtail_counts(std::span<const std::int64_t> counts,
                                          double imbalance) {
  if (!(imbalance > 0.0) || imbalance > 1.0) {
    throw InvalidArgument("imbalance factor must be in (0, 1]");
  }
  std::vector<std::int64_t> out(counts.begin(), counts.end());
  if (counts.size() < 2) return out;
  const std::int64_t n_max = *std::max_element(counts.begin(), counts.end());
  const double last = static_cast<double>(counts.size() - 1);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    const auto target = static_cast<std::int64_t>(std::llround(
        static_cast<double>(n_max) *
        std::pow(imbalance, static_cast<double>(c) / last)));
    out[c] = std::min(counts[c], target);
  }
  return out;
}

namespace {

std::vector<std::vector<std::size_t>> rows_by_class(const Dataset& data) {
  std::vector<std::vector<std::size_t>> rows(
      static_cast<std::size_t>(data.classes));
  for (std::size_t i = 0; i < data.size(); ++i) {
    rows[static_cast<std::size_t>(data.labels[i])].push_back(i);
  }
  return rows;
}

std::vector<std::size_t> shuffled(std::vector<std::size_t> rows,
                                  CounterRng& rng) {
  for (std::size_t i = rows.size(); i > 1; --i) {
    std::swap(rows[i - 1], rows[static_cast<std::size_t>(rng.below(i))]);
  }
  return rows;
}

}  // namespace

Dataset apply_longtail(const Dataset& data, double imbalance,
                       std::uint64_t seed) {
  const auto counts = data.class_counts();
  const auto keep = longtail_counts(counts, imbalance);
  auto by_class = rows_by_class(data);
  std::vector<std::size_t> chosen;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    CounterRng rng(seed, StreamTag::kLongTail, static_cast<std::uint32_t>(c));
    auto rows = shuffled(std::move(by_class[c]), rng);
    rows.resize(static_cast<std::size_t>(keep[c]));
    chosen.insert(chosen.end(), rows.begin(), rows.end());
  }
  std::sort(chosen.begin(), chosen.end());
  return data.subset(chosen);
}

std::vector<std::int64_t> apportion(std::span<const double> shares,
                                    std::int64_t total) {
  std::vector<std::int64_t> out(shares.size(), 0);
  if (shares.empty()) return out;
  const double sum = std::accumulate(shares.begin(), shares.end(), 0.0);
  if (!(sum > 0.0)) throw InvalidArgument("apportion: shares sum to zero");
  std::vector<double> remainder(shares.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    const double exact = static_cast<double>(total) * shares[i] / sum;
    out[i] = static_cast<std::int64_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(out[i]);
    assigned += out[i];
  }
  std::vector<std::size_t> order(shares.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t r = 0; assigned < total; r = (r + 1) % order.size()) {
    ++out[order[r]];
    ++assigned;
  }
  return out;
}

std::pair<Dataset, Dataset> split_eval_set(const Dataset& data,
                                           double fraction,
                                           std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InvalidArgument("eval fraction must be in (0, 1)");
  }
  if (data.size() < 2) throw InvalidArgument("need at least two examples");
  const auto n = static_cast<std::int64_t>(data.size());
  const std::int64_t total = std::clamp<std::int64_t>(
      std::llround(fraction * static_cast<double>(n)), 1, n - 1);

  auto by_class = rows_by_class(data);
  std::vector<double> shares(by_class.size());
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    shares[c] = static_cast<double>(by_class[c].size());
  }
  auto quota = apportion(shares, total);
  bool stratified = true;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (quota[c] > static_cast<std::int64_t>(by_class[c].size())) {
      stratified = false;
    }
  }

  std::vector<char> in_eval(data.size(), 0);
  if (stratified) {
    for (std::size_t c = 0; c < by_class.size(); ++c) {
      CounterRng rng(seed, StreamTag::kEvalSplit, static_cast<std::uint32_t>(c));
      const auto rows = shuffled(by_class[c], rng);
      for (std::int64_t k = 0; k < quota[c]; ++k) {
        in_eval[rows[static_cast<std::size_t>(k)]] = 1;
      }
    }
  } else {
    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), 0);
    CounterRng rng(seed, StreamTag::kEvalSplit, 0xffffffffU);
    const auto rows = shuffled(std::move(all), rng);
    for (std::int64_t k = 0; k < total; ++k) {
      in_eval[rows[static_cast<std::size_t>(k)]] = 1;
    }
  }
  std::vector<std::size_t> train_rows, eval_rows;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (in_eval[i] ? eval_rows : train_rows).push_back(i);
  }
  return {data.subset(train_rows), data.subset(eval_rows)};
}

std::vector<std::vector<std::size_t>> dirichlet_partition(
    const Dataset& data, const PartitionSpec& spec) {
  if (spec.n_clients < 1) throw InvalidArgument("need at least one client");
  if (!(spec.dirichlet_alpha > 0.0)) {
    throw InvalidArgument("dirichlet alpha must be positive");
  }
  const auto clients = static_cast<std::size_t>(spec.n_clients);
  if (data.size() < clients) {
    throw InvalidArgument("cannot give " + std::to_string(clients) +
                          " clients an example each from " +
                          std::to_string(data.size()) + " examples");
  }
  const auto by_class = rows_by_class(data);
  std::vector<std::vector<std::size_t>> shards;
  for (int attempt = 0; attempt <= spec.max_redraws; ++attempt) {
    shards.assign(clients, {});
    for (std::size_t c = 0; c < by_class.size(); ++c) {
      if (by_class[c].empty()) continue;
      CounterRng rng(spec.seed, StreamTag::kPartition,
                     static_cast<std::uint32_t>(attempt),
                     static_cast<std::uint32_t>(c));
      const auto p = dirichlet(spec.dirichlet_alpha, spec.n_clients, rng);
      const auto counts =
          apportion(p, static_cast<std::int64_t>(by_class[c].size()));
      const auto rows = shuffled(by_class[c], rng);
      std::size_t next = 0;
      for (std::size_t k = 0; k < clients; ++k) {
        for (std::int64_t r = 0; r < counts[k]; ++r) {
          shards[k].push_back(rows[next++]);
        }
      }
    }
    const bool all_filled = std::none_of(
        shards.begin(), shards.end(), [](const auto& s) { return s.empty(); });
    if (all_filled) break;
  }
  // Out of redraws: hand empty clients one example from the largest shard.
  for (auto& shard : shards) {
    if (!shard.empty()) continue;
    auto donor = std::max_element(
        shards.begin(), shards.end(),
        [](const auto& a, const auto& b) { return a.size() < b.size(); });
    shard.push_back(donor->back());
    donor->pop_back();
  }
  for (auto& shard : shards) std::sort(shard.begin(), shard.end());
  return shards;
}

double label_entropy(const Dataset& data, std::span<const std::size_t> rows) {
  if (rows.empty()) return 0.0;
  std::vector<double> hist(static_cast<std::size_t>(data.classes), 0.0);
  for (std::size_t r : rows) hist[static_cast<std::size_t>(data.labels[r])] += 1;
  double h = 0.0;
  for (double c : hist) {
    if (c == 0.0) continue;
    const double p = c / static_cast<double>(rows.size());
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace fedowen
