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
#include <filesystem>
#include <span>
#include <vector>

#include "fedowen/dataset.hpp"
#include "fedowen/error.hpp"

namespace fedowen {

/// Unsigned-byte IDX tensor (the MNIST container).
///
/// Layout: 0x00 0x00, type 0x08, rank byte, rank big-endian u32 dims,
/// then the payload in row-major order.
struct IdxTensor {
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> data;

  std::size_t element_count() const;
  friend bool operator==(const IdxTensor&, const IdxTensor&) = default;
};

enum class IdxErrorKind {
  kIo,
  kBadMagic,
  kUnsupportedType,
  kTruncatedHeader,
  kTruncatedPayload,
  kTrailingBytes,
  kDimMismatch,
};

class IdxError : public Error {
 public:
  IdxError(IdxErrorKind kind, const std::string& message)
      : Error(message), kind_(kind) {}
  IdxErrorKind kind() const noexcept { return kind_; }

 private:
  IdxErrorKind kind_;
};

IdxTensor parse_idx(std::span<const std::uint8_t> bytes);
IdxTensor read_idx(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_idx(const IdxTensor& tensor);
void write_idx(const std::filesystem::path& path, const IdxTensor& tensor);

/// Pairs an image tensor (N x ...) with a 1-D label tensor (N). Pixels are
/// scaled to [0, 1]. `classes` 0 means max label + 1.
Dataset idx_to_dataset(const IdxTensor& images, const IdxTensor& labels,
                       int classes = 0);

Dataset load_idx_dataset(const std::filesystem::path& images,
                         const std::filesystem::path& labels, int classes = 0);

}  // namespace fedowen
