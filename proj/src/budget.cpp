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

#include "fedowen/budget.hpp"

#include <string>

namespace fedowen {

BudgetMeter::BudgetMeter(std::int64_t limit) : limit_(limit) {
  if (limit < 0) throw InvalidArgument("budget limit must be non-negative");
}

std::optional<std::int64_t> BudgetMeter::try_charge(std::int64_t k) {
  if (k < 0) throw InvalidArgument("budget charge must be non-negative");
  std::int64_t current = used_.load(std::memory_order_relaxed);
  do {
    if (k > limit_ - current) return std::nullopt;
  } while (!used_.compare_exchange_weak(current, current + k,
                                        std::memory_order_acq_rel,
                                        std::memory_order_relaxed));
  return limit_ - (current + k);
}

std::int64_t BudgetMeter::charge(std::int64_t k) {
  if (auto left = try_charge(k)) return *left;
  throw BudgetExhausted("evaluation budget exhausted: requested " +
                        std::to_string(k) + ", remaining " +
                        std::to_string(remaining()) + " of " +
                        std::to_string(limit_));
}

}  // namespace fedowen
