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

#include "fedowen/coalition.hpp"

#include <sstream>

#include "fedowen/error.hpp"

namespace fedowen {

namespace {

void check_player_count(int n) {
  if (n < 0 || n > kMaxPlayers) {
    throw InvalidArgument("coalition player count " + std::to_string(n) +
                          " outside [0, 64]");
  }
}

}  // namespace

Coalition::Coalition(int n) : n_(n) { check_player_count(n); }

Coalition::Coalition(int n, std::uint64_t mask) : n_(n), mask_(mask) {
  check_player_count(n);
  if ((mask & ~low_bits(n)) != 0) {
    throw InvalidArgument("coalition mask uses bits above player count " +
                          std::to_string(n));
  }
}

Coalition Coalition::full(int n) { return Coalition(n, low_bits(n)); }

Coalition Coalition::of(int n, const std::vector<int>& members) {
  Coalition c(n);
  for (int j : members) c = c.with(j);
  return c;
}

void Coalition::check_index(int j) const {
  if (j < 0 || j >= n_) {
    throw InvalidArgument("player index " + std::to_string(j) +
                          " out of range for " + std::to_string(n_) +
                          " players");
  }
}

bool Coalition::contains(int j) const {
  check_index(j);
  return (mask_ >> j) & 1U;
}

Coalition Coalition::with(int j) const {
  check_index(j);
  Coalition out = *this;
  out.mask_ |= std::uint64_t{1} << j;
  return out;
}

Coalition Coalition::without(int j) const {
  check_index(j);
  Coalition out = *this;
  out.mask_ &= ~(std::uint64_t{1} << j);
  return out;
}

std::vector<int> Coalition::members() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) {
    out.push_back(std::countr_zero(m));
  }
  return out;
}

std::string Coalition::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int j : members()) {
    if (!first) os << ',';
    os << j;
    first = false;
  }
  os << '}';
  return os.str();
}

Coalition coalition_insert(Coalition c, int j) { return c.with(j); }

}  // namespace fedowen
