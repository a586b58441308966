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

#include <atomic>
#include <cstdint>
#include <optional>

#include "fedowen/error.hpp"

namespace fedowen {

class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// Shared counter of utility evaluations with a hard limit.
///
/// `try_charge` is an atomic reserve-or-refuse: it either books all `k`
/// calls or none of them. `used() <= limit()` holds at every instant.
class BudgetMeter {
 public:
  explicit BudgetMeter(std::int64_t limit);

  BudgetMeter(const BudgetMeter&) = delete;
  BudgetMeter& operator=(const BudgetMeter&) = delete;

  std::int64_t limit() const noexcept { return limit_; }
  std::int64_t used() const noexcept {
    return used_.load(std::memory_order_acquire);
  }
  std::int64_t remaining() const noexcept { return limit_ - used(); }
  bool exhausted() const noexcept { return remaining() == 0; }

  /// Books k calls; returns the remaining budget, or nullopt (and changes
  /// nothing) when the request would overrun the limit.
  std::optional<std::int64_t> try_charge(std::int64_t k);

  /// Like try_charge but throws BudgetExhausted on refusal.
  std::int64_t charge(std::int64_t k);

 private:
  std::int64_t limit_;
  std::atomic<std::int64_t> used_{0};
};

/// Same as `meter.try_charge(k)`: remaining budget, or nullopt if `k` does not fit.
inline std::optional<std::int64_t> budget_charge(BudgetMeter& meter,
                                                 std::int64_t k) {
  return meter.try_charge(k);
}

}  // namespace fedowen
