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

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace fedowen {

inline constexpr int kMaxPlayers = 64;

/// A subset of players {0, ..., n-1} stored as a 64-bit mask.
///
/// Only the low `n` bits may be set. Coalitions are small values and are
/// passed by copy everywhere.
class Coalition {
 public:
  Coalition() = default;
  explicit Coalition(int n);
  Coalition(int n, std::uint64_t mask);

  static Coalition empty(int n) { return Coalition(n); }
  static Coalition full(int n);
  static Coalition of(int n, const std::vector<int>& members);

  int players() const noexcept { return n_; }
  std::uint64_t mask() const noexcept { return mask_; }
  int size() const noexcept { return std::popcount(mask_); }
  bool is_empty() const noexcept { return mask_ == 0; }

  bool contains(int j) const;
  /// Returns this coalition with `j` added. Throws on out-of-range `j`.
  Coalition with(int j) const;
  Coalition without(int j) const;
  std::vector<int> members() const;

  std::string to_string() const;

  friend bool operator==(const Coalition&, const Coalition&) = default;

 private:
  void check_index(int j) const;

  int n_ = 0;
  std::uint64_t mask_ = 0;
};

/// C <- C u {j}. The argument is left untouched.
Coalition coalition_insert(Coalition c, int j);

/// Mask with the low `n` bits set.
constexpr std::uint64_t low_bits(int n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

}  // namespace fedowen
