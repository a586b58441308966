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

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fedowen/aggregation.hpp"
#include "fedowen/error.hpp"
#include "fedowen/rng.hpp"

using namespace fedowen;
using doctest::Approx;

namespace {

ModelParams constant_model(double x, std::size_t size = 6) {
  ModelParams m;
  m.layout = {{"W", 2, static_cast<int>(size / 2 - 1)}, {"b", 2, 1}};
  m.values.assign(layout_size(m.layout), x);
  return m;
}

}  // namespace

TEST_CASE("softmax weights") {
  for (double c : {-50.0, 0.0, 3.7, 800.0}) {
    const std::vector<double> phi = {c, c, c};
    for (double a : softmax_weights(phi)) CHECK(a == Approx(1.0 / 3.0).epsilon(1e-12));
  }
  const std::vector<double> two = {0.0, std::log(3.0)};
  const auto a = softmax_weights(two);
  CHECK(a[0] == Approx(0.25).epsilon(1e-12));
  CHECK(a[1] == Approx(0.75).epsilon(1e-12));
  const std::vector<double> one = {7.2};
  CHECK(softmax_weights(one) == std::vector<double>{1.0});
  CHECK_THROWS_AS(softmax_weights(std::vector<double>{}), InvalidArgument);
  CHECK_THROWS_AS(softmax_weights(std::vector<double>{1.0, NAN}), InvalidArgument);
}

TEST_CASE("softmax shift invariance and monotonicity") {
  CounterRng rng(1, StreamTag::kGameParams);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> phi(6);
    for (double& p : phi) p = rng.normal();
    const auto base = softmax_weights(phi);
    CHECK(std::accumulate(base.begin(), base.end(), 0.0) == Approx(1.0).epsilon(1e-12));
    std::vector<double> shifted = phi;
    const double c = 10 * rng.normal();
    for (double& p : shifted) p += c;
    const auto s = softmax_weights(shifted);
    for (std::size_t i = 0; i < phi.size(); ++i) CHECK(std::abs(s[i] - base[i]) <= 1e-12);

    std::vector<double> bumped = phi;
    bumped[2] += 0.5;
    const auto b = softmax_weights(bumped);
    CHECK(b[2] > base[2]);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      if (i != 2) CHECK(b[i] < base[i]);
    }
  }
}

TEST_CASE("aggregate") {
  const std::vector<ModelParams> same = {constant_model(0.3), constant_model(0.3)};
  const std::vector<double> odd = {0.123, 0.877};
  CHECK(aggregate(same, odd) == same[0]);

  const std::vector<ModelParams> zo = {constant_model(0.0), constant_model(1.0)};
  const std::vector<double> quarter = {0.25, 0.75};
  for (double x : aggregate(zo, quarter).values) CHECK(x == 0.75);

  CounterRng rng(2, StreamTag::kGameParams);
  std::vector<ModelParams> mixed;
  for (int i = 0; i < 4; ++i) {
    ModelParams m = constant_model(0.0, 10);
    for (double& v : m.values) v = rng.normal();
    mixed.push_back(m);
  }
  const std::vector<double> hot = {0, 0, 1, 0};
  CHECK(aggregate(mixed, hot) == mixed[2]);

  const std::vector<double> alpha = {0.1, 0.2, 0.3, 0.4};
  const ModelParams out = aggregate(mixed, alpha);
  for (std::size_t p = 0; p < out.values.size(); ++p) {
    double lo = mixed[0].values[p];
    double hi = lo;
    double expect = 0.0;
    for (std::size_t i = 0; i < mixed.size(); ++i) {
      lo = std::min(lo, mixed[i].values[p]);
      hi = std::max(hi, mixed[i].values[p]);
      expect += alpha[i] * mixed[i].values[p];
    }
    CHECK(out.values[p] >= lo);
    CHECK(out.values[p] <= hi);
    CHECK(out.values[p] == Approx(expect).epsilon(1e-12));
  }

  std::vector<ModelParams> bad = {constant_model(0.0, 6), constant_model(0.0, 10)};
  const std::vector<double> half = {0.5, 0.5};
  CHECK_THROWS_AS(aggregate(bad, half), InvalidArgument);
  CHECK_THROWS_AS(aggregate(same, std::span<const double>(quarter).subspan(0, 1)), InvalidArgument);
}

TEST_CASE("fedavg") {
  const std::vector<ModelParams> zo = {constant_model(0.0), constant_model(1.0)};
  for (double x : fedavg_uniform(zo).values) CHECK(x == 0.5);
  const std::vector<ModelParams> one = {constant_model(0.4)};
  CHECK(fedavg_uniform(one) == one[0]);
  const std::vector<ModelParams> three = {constant_model(0.0), constant_model(3.0),
                                          constant_model(6.0)};
  for (double x : fedavg_uniform(three).values) CHECK(x == Approx(3.0));
  CHECK_THROWS_AS(fedavg_uniform(std::vector<ModelParams>{}), InvalidArgument);
}

TEST_CASE("shapfed-wa weights") {
  const std::vector<std::vector<double>> aligned = {{1, 2}, {2, 4}, {0.5, 1}};
  for (double g : shapfed_wa_weights(aligned)) CHECK(g == Approx(1.0 / 3.0));

  // Reference is the mean (2/3, e/3); the odd client's cosine is
  // (e^2/3) / (e * |mean|), the others' 2/3 / |mean|.
  const double e = 1e-3;
  const std::vector<std::vector<double>> odd = {{1, 0}, {1, 0}, {0, e}};
  const double norm = std::sqrt(4.0 / 9.0 + e * e / 9.0);
  const double c_major = (2.0 / 3.0) / norm;
  const double c_minor = (e / 3.0) / norm;
  const auto w = shapfed_wa_weights(odd);
  CHECK(w[2] == Approx(c_minor / (2 * c_major + c_minor)).epsilon(1e-9));
  CHECK(w[2] < 1e-3);
  CHECK(w[0] == Approx(w[1]));

  const std::vector<std::vector<double>> single = {{0.3, -1.0}};
  CHECK(shapfed_wa_weights(single) == std::vector<double>{1.0});

  // Zero gradient gets weight 0; all-negative falls back to uniform.
  const std::vector<std::vector<double>> with_zero = {{1, 1}, {0, 0}};
  CHECK(shapfed_wa_weights(with_zero)[1] == 0.0);
  const std::vector<std::vector<double>> opposed = {{1, 0}, {-1, 0}};
  const auto u = shapfed_wa_weights(opposed);
  CHECK(u[0] == 0.5);
  CHECK(u[1] == 0.5);

  const std::vector<std::vector<std::vector<double>>> per_class = {
      {{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}};
  for (double g : shapfed_wa_class_weights(per_class)) CHECK(g == Approx(0.5));
}

TEST_CASE("model params segments") {
  ModelParams m = constant_model(1.0, 8);
  CHECK(m.offset("W") == 0);
  CHECK(m.offset("b") == 6);
  CHECK(m.view("b").size() == 2);
  CHECK_THROWS_AS((void)m.offset("nope"), InvalidArgument);
  CHECK(is_aggregator_id("shapfed-wa"));
  CHECK_FALSE(is_aggregator_id("median"));
}
