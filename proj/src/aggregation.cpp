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

#include "fedowen/aggregation.hpp"

#include <algorithm>
#include <cmath>

#include "fedowen/error.hpp"

namespace fedowen {

std::size_t layout_size(const std::vector<Segment>& layout) {
  std::size_t total = 0;
  for (const auto& s : layout) total += s.size();
  return total;
}

std::size_t ModelParams::offset(std::string_view name) const {
  std::size_t off = 0;
  for (const auto& s : layout) {
    if (s.name == name) return off;
    off += s.size();
  }
  throw InvalidArgument("model has no segment '" + std::string(name) + "'");
}

const Segment& ModelParams::segment(std::string_view name) const {
  for (const auto& s : layout) {
    if (s.name == name) return s;
  }
  throw InvalidArgument("model has no segment '" + std::string(name) + "'");
}

std::span<const double> ModelParams::view(std::string_view name) const {
  return std::span<const double>(values).subspan(offset(name),
                                                 segment(name).size());
}

std::span<double> ModelParams::view(std::string_view name) {
  return std::span<double>(values).subspan(offset(name), segment(name).size());
}

std::vector<double> softmax_weights(std::span<const double> phi) {
  if (phi.empty()) throw InvalidArgument("softmax_weights: empty vector");
  for (double x : phi) {
    if (!std::isfinite(x)) throw InvalidArgument("softmax_weights: non-finite phi");
  }
  const double top = *std::max_element(phi.begin(), phi.end());
  std::vector<double> alpha(phi.size());
  double total = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    alpha[i] = std::exp(phi[i] - top);
    total += alpha[i];
  }
  for (auto& a : alpha) a /= total;
  return alpha;
}

ModelParams aggregate(std::span<const ModelParams> models,
                      std::span<const double> alpha) {
  if (models.empty()) throw InvalidArgument("aggregate: no models");
  if (models.size() != alpha.size()) {
    throw InvalidArgument("aggregate: " + std::to_string(models.size()) +
                          " models but " + std::to_string(alpha.size()) +
                          " weights");
  }
  const auto& layout = models.front().layout;
  for (const auto& m : models) {
    if (m.layout != layout || m.values.size() != layout_size(layout)) {
      throw InvalidArgument("aggregate: model layouts differ");
    }
  }
  ModelParams out{layout, std::vector<double>(models.front().values.size())};
  for (std::size_t p = 0; p < out.values.size(); ++p) {
    // A coordinate on which every model agrees is copied, so identical
    // models aggregate to themselves bit for bit.
    const double first = models.front().values[p];
    bool same = true;
    double acc = 0.0;
    for (std::size_t i = 0; i < models.size(); ++i) {
      const double v = models[i].values[p];
      same = same && v == first;
      acc += alpha[i] * v;
    }
    out.values[p] = same ? first : acc;
  }
  return out;
}

ModelParams fedavg_uniform(std::span<const ModelParams> models) {
  if (models.empty()) throw InvalidArgument("fedavg_uniform: no models");
  const std::vector<double> alpha(models.size(),
                                  1.0 / static_cast<double>(models.size()));
  return aggregate(models, alpha);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("cosine_similarity: length mismatch");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

std::vector<double> normalize_or_uniform(std::vector<double> gamma) {
  double total = 0.0;
  for (auto& g : gamma) {
    g = std::max(g, 0.0);
    total += g;
  }
  if (total <= 0.0) {
    std::fill(gamma.begin(), gamma.end(),
              1.0 / static_cast<double>(gamma.size()));
  } else {
    for (auto& g : gamma) g /= total;
  }
  return gamma;
}

std::vector<double> mean_of(std::span<const std::vector<double>> rows) {
  std::vector<double> mean(rows.front().size(), 0.0);
  for (const auto& r : rows) {
    if (r.size() != mean.size()) {
      throw InvalidArgument("shapfed_wa: gradient lengths differ");
    }
    for (std::size_t i = 0; i < r.size(); ++i) mean[i] += r[i];
  }
  for (auto& m : mean) m /= static_cast<double>(rows.size());
  return mean;
}

}  // namespace

std::vector<double> shapfed_wa_weights(
    std::span<const std::vector<double>> grads,
    std::span<const double> reference) {
  if (grads.empty()) throw InvalidArgument("shapfed_wa: no clients");
  std::vector<double> gamma(grads.size());
  for (std::size_t i = 0; i < grads.size(); ++i) {
    gamma[i] = cosine_similarity(grads[i], reference);
  }
  return normalize_or_uniform(std::move(gamma));
}

std::vector<double> shapfed_wa_weights(
    std::span<const std::vector<double>> grads) {
  if (grads.empty()) throw InvalidArgument("shapfed_wa: no clients");
  const std::vector<double> reference = mean_of(grads);
  return shapfed_wa_weights(grads, reference);
}

std::vector<double> shapfed_wa_class_weights(
    std::span<const std::vector<std::vector<double>>> grads) {
  if (grads.empty()) throw InvalidArgument("shapfed_wa: no clients");
  const std::size_t classes = grads.front().size();
  std::vector<double> gamma(grads.size(), 0.0);
  if (classes == 0) return normalize_or_uniform(std::move(gamma));
  std::vector<std::vector<double>> rows(grads.size());
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < grads.size(); ++i) {
      if (grads[i].size() != classes) {
        throw InvalidArgument("shapfed_wa: class counts differ");
      }
      rows[i] = grads[i][c];
    }
    const std::vector<double> reference = mean_of(rows);
    for (std::size_t i = 0; i < grads.size(); ++i) {
      gamma[i] += std::max(cosine_similarity(rows[i], reference), 0.0);
    }
  }
  for (auto& g : gamma) g /= static_cast<double>(classes);
  return normalize_or_uniform(std::move(gamma));
}

const std::vector<std::string>& aggregator_ids() {
  static const std::vector<std::string> ids = {"softmax-contrib", "fedavg",
                                               "shapfed-wa"};
  return ids;
}

bool is_aggregator_id(std::string_view id) {
  const auto& ids = aggregator_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

}  // namespace fedowen
