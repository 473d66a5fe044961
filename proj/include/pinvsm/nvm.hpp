/*
 * Copyright 2026 The pinvsm-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pinvsm/bytes.hpp"
#include "pinvsm/error.hpp"

namespace pinvsm {

using Offset = std::uint64_t;
using OwnerId = std::uint64_t;

struct Allocation {
  Offset offset = 0;
  std::uint64_t length = 0;
  OwnerId owner = 0;

  bool operator==(const Allocation&) const = default;
};

/**
 * Persistent byte-addressable space of one DPU.
 *
 * Space management is first-fit over the gaps between live allocations,
 * without compaction. Freshly allocated ranges are zero-filled.
 */
class NvmSpace {
 public:
  explicit NvmSpace(std::uint64_t capacity = 0) : content_(capacity, 0) {}

  std::uint64_t capacity() const noexcept { return content_.size(); }

  Offset alloc(std::uint64_t length, OwnerId owner) {
    if (length == 0) fail(Errc::OutOfBounds, "zero-length allocation");
    Offset cursor = 0;
    for (const auto& [off, a] : table_) {
      if (off - cursor >= length) break;
      cursor = off + a.length;
    }
    if (cursor > capacity() || capacity() - cursor < length) {
      fail(Errc::NoSpace, "no free gap of " + std::to_string(length) + " bytes");
    }
    table_.emplace(cursor, Allocation{cursor, length, owner});
    std::fill_n(content_.begin() + static_cast<std::ptrdiff_t>(cursor), length, std::uint8_t{0});
    return cursor;
  }

  void free(Offset offset) {
    if (table_.erase(offset) == 0) fail(Errc::OutOfBounds, "no allocation at offset " + std::to_string(offset));
  }

  std::span<const std::uint8_t> bytes(Offset offset, std::uint64_t length) const {
    check(offset, length);
    return std::span<const std::uint8_t>(content_).subspan(offset, length);
  }

  std::span<std::uint8_t> bytes(Offset offset, std::uint64_t length) {
    check(offset, length);
    return std::span<std::uint8_t>(content_).subspan(offset, length);
  }

  Value load(Offset offset, Granularity g) const { return load_le(bytes(offset, width(g))); }
  void store(Offset offset, Granularity g, Value v) {
    require_representable(v, g);
    store_le(bytes(offset, width(g)), v);
  }

  std::vector<Allocation> allocations() const {
    std::vector<Allocation> out;
    out.reserve(table_.size());
    for (const auto& [_, a] : table_) out.push_back(a);
    return out;
  }

  std::span<const std::uint8_t> content() const noexcept { return content_; }

  /// Rebuilds a space from persisted parts; validates the allocation table.
  static NvmSpace restore(std::vector<std::uint8_t> content, const std::vector<Allocation>& table) {
    NvmSpace s;
    s.content_ = std::move(content);
    Offset prev_end = 0;
    for (const auto& a : table) {
      if (a.length == 0 || a.offset < prev_end || a.offset + a.length > s.capacity()) {
        fail(Errc::Io, "corrupt allocation table");
      }
      prev_end = a.offset + a.length;
      s.table_.emplace(a.offset, a);
    }
    return s;
  }

  bool operator==(const NvmSpace&) const = default;

 private:
  void check(Offset offset, std::uint64_t length) const {
    if (offset > capacity() || capacity() - offset < length) {
      fail(Errc::OutOfBounds, "range [" + std::to_string(offset) + ", +" + std::to_string(length) + ") outside NVM");
    }
  }

  std::vector<std::uint8_t> content_;
  std::map<Offset, Allocation> table_;
};

}  // namespace pinvsm
