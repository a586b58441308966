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

#include <numeric>

#include "fedowen/dataset.hpp"
#include "fedowen/error.hpp"
#include "fedowen/model.hpp"
#include "grad_check.hpp"

using namespace fedowen;

namespace {

Dataset blobs(int classes, int examples, int dim, double sep, std::uint64_t seed) {
  BlobSpec b;
  b.classes = classes;
  b.examples = examples;
  b.dim = dim;
  b.separation = sep;
  b.seed = seed;
  return make_blobs(b);
}

std::vector<std::size_t> all_rows(const Dataset& d) {
  std::vector<std::size_t> r(d.size());
  std::iota(r.begin(), r.end(), 0);
  return r;
}

}  // namespace

TEST_CASE("layouts") {
  ModelSpec lr{Architecture::kLogistic, 5, 3, 7};
  CHECK(init_model(lr, 1).values.size() == 3 * 5 + 3);
  CHECK(lr.output_weights() == "W");
  ModelSpec mlp{Architecture::kMlp, 5, 3, 7};
  CHECK(init_model(mlp, 1).values.size() == 7 * 5 + 7 + 3 * 7 + 3);
  CHECK(mlp.output_weights() == "W2");
  CHECK(init_model(mlp, 1) == init_model(mlp, 1));
  CHECK(parse_architecture("mlp") == Architecture::kMlp);
  CHECK_THROWS_AS(parse_architecture("cnn"), InvalidArgument);
}

TEST_CASE("analytic gradients match finite differences") {
  const Dataset d = blobs(4, 200, 6, 1.0, 2);
  for (auto arch : {Architecture::kLogistic, Architecture::kMlp}) {
    const ModelSpec spec{arch, 6, 4, 5};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      CHECK(gradcheck::relative_error(spec, d, seed) < 1e-4);
    }
  }
  // Single example, logistic regression, tighter bound.
  const ModelSpec spec{Architecture::kLogistic, 6, 4, 5};
  CHECK(gradcheck::relative_error(spec, d.subset(std::vector<std::size_t>{0}), 3) < 1e-5);
}

TEST_CASE("local training") {
  const Dataset d = blobs(2, 400, 5, 3.0, 1);
  const ModelSpec spec{Architecture::kLogistic, 5, 2, 8};
  const ModelParams start = init_model(spec, 4);
  const auto rows = all_rows(d);

  CounterRng r0(1, StreamTag::kTraining);
  CHECK(local_train(spec, start, d, rows, {3, 0.0, 16}, r0).params == start);

  CounterRng r1(1, StreamTag::kTraining);
  const auto empty = local_train(spec, start, d, {}, {1, 0.1, 16}, r1);
  CHECK(empty.empty_shard);
  CHECK(empty.params == start);

  CounterRng r2(1, StreamTag::kTraining);
  const auto trained = local_train(spec, start, d, rows, {50, 0.1, 16}, r2);
  CHECK(accuracy(spec, trained.params, d) >= 0.99);

  CounterRng r3(1, StreamTag::kTraining);
  CHECK(local_train(spec, start, d, rows, {50, 0.1, 16}, r3).params == trained.params);
}

TEST_CASE("one epoch does not increase the training loss") {
  for (auto arch : {Architecture::kLogistic, Architecture::kMlp}) {
    const ModelSpec spec{arch, 20, 10, 32};
    int violations = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const Dataset d = blobs(10, 600, 20, 0.35, seed);
      const auto rows = all_rows(d);
      const ModelParams p = init_model(spec, seed);
      CounterRng rng(seed, StreamTag::kTraining);
      const auto next = local_train(spec, p, d, rows, {1, 0.05, 16}, rng);
      if (loss_and_gradient(spec, next.params, d, rows, nullptr) >
          loss_and_gradient(spec, p, d, rows, nullptr)) {
        ++violations;
      }
    }
    CHECK(violations == 0);
  }
}
