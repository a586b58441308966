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

#include "fedowen/idx.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <string>

namespace fedowen {

namespace {

constexpr std::uint8_t kUnsignedByte = 0x08;
constexpr std::size_t kPrefix = 4;

}  // namespace

std::size_t IdxTensor::element_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

IdxTensor parse_idx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPrefix) {
    throw IdxError(IdxErrorKind::kTruncatedHeader,
                   "idx: file shorter than the 4-byte magic");
  }
  if (bytes[0] != 0 || bytes[1] != 0) {
    throw IdxError(IdxErrorKind::kBadMagic,
                   "idx: bad magic, expected leading bytes 00 00");
  }
  if (bytes[2] != kUnsignedByte) {
    throw IdxError(IdxErrorKind::kUnsupportedType,
                   "idx: unsupported element type " + std::to_string(bytes[2]) +
                       " (only 0x08 unsigned byte)");
  }
  const std::size_t rank = bytes[3];
  const std::size_t header = kPrefix + 4 * rank;
  if (bytes.size() < header) {
    throw IdxError(IdxErrorKind::kTruncatedHeader,
                   "idx: header needs " + std::to_string(header) +
                       " bytes, file has " + std::to_string(bytes.size()));
  }
  IdxTensor t;
  t.dims.resize(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    const auto* p = bytes.data() + kPrefix + 4 * i;
    t.dims[i] = (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
                (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
  }
  const std::size_t expected = t.element_count();
  const std::size_t actual = bytes.size() - header;
  if (actual < expected) {
    throw IdxError(IdxErrorKind::kTruncatedPayload,
                   "idx: truncated payload, expected " +
                       std::to_string(expected) + " bytes, got " +
                       std::to_string(actual));
  }
  if (actual > expected) {
    throw IdxError(IdxErrorKind::kTrailingBytes,
                   "idx: " + std::to_string(actual - expected) +
                       " bytes past the declared payload of " +
                       std::to_string(expected));
  }
  t.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header),
                bytes.end());
  return t;
}

IdxTensor read_idx(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IdxError(IdxErrorKind::kIo, "idx: cannot open '" + path.string() + "'");
  }
  const std::vector<std::uint8_t> bytes(std::istreambuf_iterator<char>(in), {});
  return parse_idx(bytes);
}

std::vector<std::uint8_t> encode_idx(const IdxTensor& t) {
  if (t.dims.size() > 255) {
    throw IdxError(IdxErrorKind::kDimMismatch, "idx: rank above 255");
  }
  if (t.data.size() != t.element_count()) {
    throw IdxError(IdxErrorKind::kDimMismatch,
                   "idx: payload size does not match dims");
  }
  std::vector<std::uint8_t> out = {0, 0, kUnsignedByte,
                                   static_cast<std::uint8_t>(t.dims.size())};
  for (auto d : t.dims) {
    out.push_back(static_cast<std::uint8_t>(d >> 24));
    out.push_back(static_cast<std::uint8_t>(d >> 16));
    out.push_back(static_cast<std::uint8_t>(d >> 8));
    out.push_back(static_cast<std::uint8_t>(d));
  }
  out.insert(out.end(), t.data.begin(), t.data.end());
  return out;
}

void write_idx(const std::filesystem::path& path, const IdxTensor& tensor) {
  const auto bytes = encode_idx(tensor);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IdxError(IdxErrorKind::kIo, "idx: cannot write '" + path.string() + "'");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IdxError(IdxErrorKind::kIo, "idx: write failed for '" + path.string() + "'");
  }
}

Dataset idx_to_dataset(const IdxTensor& images, const IdxTensor& labels,
                       int classes) {
  if (labels.dims.size() != 1) {
    throw IdxError(IdxErrorKind::kDimMismatch, "idx: labels must be 1-D");
  }
  if (images.dims.empty() || images.dims[0] != labels.dims[0]) {
    throw IdxError(IdxErrorKind::kDimMismatch,
                   "idx: image count does not match label count");
  }
  const std::size_t n = labels.dims[0];
  const std::size_t dim = n == 0 ? 0 : images.element_count() / n;
  Dataset d;
  d.dim = static_cast<int>(dim);
  const int top = labels.data.empty()
                      ? 0
                      : *std::max_element(labels.data.begin(), labels.data.end());
  d.classes = classes > 0 ? classes : top + 1;
  d.features.resize(images.data.size());
  std::transform(images.data.begin(), images.data.end(), d.features.begin(),
                 [](std::uint8_t b) { return b / 255.0; });
  d.labels.assign(labels.data.begin(), labels.data.end());
  d.ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.ids[i] = static_cast<std::int64_t>(i);
  d.validate();
  return d;
}

Dataset load_idx_dataset(const std::filesystem::path& images,
                         const std::filesystem::path& labels, int classes) {
  return idx_to_dataset(read_idx(images), read_idx(labels), classes);
}

}  // namespace fedowen
