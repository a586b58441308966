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

#include "fedowen/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fedowen/error.hpp"
#include "fedowen/rng.hpp"

namespace fedowen {

Architecture parse_architecture(std::string_view text) {
  if (text == "logistic") return Architecture::kLogistic;
  if (text == "mlp") return Architecture::kMlp;
  throw InvalidArgument("unknown model '" + std::string(text) +
                        "' (expected logistic|mlp)");
}

std::string_view to_string(Architecture arch) {
  return arch == Architecture::kLogistic ? "logistic" : "mlp";
}

std::vector<Segment> ModelSpec::layout() const {
  if (arch == Architecture::kLogistic) {
    return {{"W", classes, dim}, {"b", classes, 1}};
  }
  return {{"W1", hidden, dim},
          {"b1", hidden, 1},
          {"W2", classes, hidden},
          {"b2", classes, 1}};
}

std::string_view ModelSpec::output_weights() const {
  return arch == Architecture::kLogistic ? "W" : "W2";
}

ModelParams init_model(const ModelSpec& spec, std::uint64_t seed) {
  ModelParams p{spec.layout(), {}};
  p.values.assign(layout_size(p.layout), 0.0);
  CounterRng rng(seed, StreamTag::kModelInit);
  std::size_t off = 0;
  for (const auto& s : p.layout) {
    if (s.cols > 1) {
      const double scale = std::sqrt(2.0 / (s.rows + s.cols));
      for (std::size_t i = 0; i < s.size(); ++i) {
        p.values[off + i] = scale * rng.normal();
      }
    }
    off += s.size();
  }
  return p;
}

namespace {

// Dense y = W x + b for a row-major (rows x cols) W.
void affine(std::span<const double> w, std::span<const double> b,
            std::span<const double> x, std::span<double> y) {
  const std::size_t cols = x.size();
  for (std::size_t r = 0; r < y.size(); ++r) {
    double acc = b[r];
    const double* wr = w.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
}

// In-place softmax; returns log-sum-exp.
double softmax_inplace(std::span<double> z) {
  const double top = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (auto& v : z) {
    v = std::exp(v - top);
    total += v;
  }
  for (auto& v : z) v /= total;
  return top + std::log(total);
}

void check_params(const ModelSpec& spec, const ModelParams& params) {
  if (params.layout != spec.layout() ||
      params.values.size() != layout_size(params.layout)) {
    throw InvalidArgument("model parameters do not match the architecture");
  }
}

}  // namespace

std::vector<double> logits(const ModelSpec& spec, const ModelParams& params,
                           std::span<const double> x) {
  std::vector<double> z(static_cast<std::size_t>(spec.classes));
  if (spec.arch == Architecture::kLogistic) {
    affine(params.view("W"), params.view("b"), x, z);
    return z;
  }
  std::vector<double> h(static_cast<std::size_t>(spec.hidden));
  affine(params.view("W1"), params.view("b1"), x, h);
  for (auto& v : h) v = std::tanh(v);
  affine(params.view("W2"), params.view("b2"), h, z);
  return z;
}

int predict(const ModelSpec& spec, const ModelParams& params,
            std::span<const double> x) {
  const auto z = logits(spec, params, x);
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

double accuracy(const ModelSpec& spec, const ModelParams& params,
                const Dataset& data) {
  check_params(spec, params);
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (predict(spec, params, data.row(i)) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double loss_and_gradient(const ModelSpec& spec, const ModelParams& params,
                         const Dataset& data, std::span<const std::size_t> rows,
                         std::vector<double>* grad) {
  check_params(spec, params);
  if (data.dim != spec.dim) {
    throw InvalidArgument("dataset dimension does not match the model");
  }
  if (grad) grad->assign(params.values.size(), 0.0);
  if (rows.empty()) return 0.0;

  const auto C = static_cast<std::size_t>(spec.classes);
  const auto d = static_cast<std::size_t>(spec.dim);
  const auto H = static_cast<std::size_t>(spec.hidden);
  const double inv = 1.0 / static_cast<double>(rows.size());
  double loss = 0.0;
  std::vector<double> z(C), h(H), dh(H);

  for (std::size_t r : rows) {
    const auto x = data.row(r);
    const auto y = static_cast<std::size_t>(data.labels[r]);
    if (spec.arch == Architecture::kLogistic) {
      affine(params.view("W"), params.view("b"), x, z);
    } else {
      affine(params.view("W1"), params.view("b1"), x, h);
      for (auto& v : h) v = std::tanh(v);
      affine(params.view("W2"), params.view("b2"), h, z);
    }
    const double raw_y = z[y];
    const double lse = softmax_inplace(z);
    loss += (lse - raw_y) * inv;
    if (!grad) continue;

    z[y] -= 1.0;  // dL/dlogits = p - onehot(y)
    auto& g = *grad;
    if (spec.arch == Architecture::kLogistic) {
      const std::size_t ow = params.offset("W"), ob = params.offset("b");
      for (std::size_t c = 0; c < C; ++c) {
        const double dz = z[c] * inv;
        for (std::size_t k = 0; k < d; ++k) g[ow + c * d + k] += dz * x[k];
        g[ob + c] += dz;
      }
    } else {
      const std::size_t o1 = params.offset("W1"), ob1 = params.offset("b1");
      const std::size_t o2 = params.offset("W2"), ob2 = params.offset("b2");
      const auto w2 = params.view("W2");
      std::fill(dh.begin(), dh.end(), 0.0);
      for (std::size_t c = 0; c < C; ++c) {
        const double dz = z[c] * inv;
        for (std::size_t j = 0; j < H; ++j) {
          g[o2 + c * H + j] += dz * h[j];
          dh[j] += w2[c * H + j] * dz;
        }
        g[ob2 + c] += dz;
      }
      for (std::size_t j = 0; j < H; ++j) {
        const double da = dh[j] * (1.0 - h[j] * h[j]);
        for (std::size_t k = 0; k < d; ++k) g[o1 + j * d + k] += da * x[k];
        g[ob1 + j] += da;
      }
    }
  }
  return loss;
}

TrainResult local_train(const ModelSpec& spec, const ModelParams& params,
                        const Dataset& data, std::span<const std::size_t> shard,
                        const TrainConfig& cfg, CounterRng& rng) {
  check_params(spec, params);
  if (cfg.epochs < 0 || cfg.batch < 1 || cfg.lr < 0.0) {
    throw InvalidArgument("invalid training configuration");
  }
  TrainResult out{params, shard.empty()};
  if (shard.empty() || cfg.lr == 0.0) return out;

  std::vector<std::size_t> order(shard.begin(), shard.end());
  std::vector<double> grad;
  const auto batch = static_cast<std::size_t>(cfg.batch);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
    }
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      loss_and_gradient(spec, out.params, data,
                        std::span<const std::size_t>(order).subspan(
                            start, stop - start),
                        &grad);
      for (std::size_t p = 0; p < grad.size(); ++p) {
        out.params.values[p] -= cfg.lr * grad[p];
      }
    }
  }
  return out;
}

}  // namespace fedowen
