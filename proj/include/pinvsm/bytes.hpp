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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pinvsm/error.hpp"

namespace pinvsm {

using Value = std::uint64_t;

/// Item width in bytes. Only 1, 2, 4 and 8 are valid.
enum class Granularity : std::uint8_t { B1 = 1, B2 = 2, B4 = 4, B8 = 8 };

constexpr std::size_t width(Granularity g) noexcept { return static_cast<std::size_t>(g); }

inline Granularity make_granularity(std::uint64_t bytes) {
  switch (bytes) {
    case 1: return Granularity::B1;
    case 2: return Granularity::B2;
    case 4: return Granularity::B4;
    case 8: return Granularity::B8;
    default: fail(Errc::BadGranularity, "granularity " + std::to_string(bytes) + " not in {1,2,4,8}");
  }
}

/// Largest value an item of width g can hold.
constexpr Value max_value(Granularity g) noexcept {
  return g == Granularity::B8 ? ~Value{0} : (Value{1} << (8 * width(g))) - 1;
}

constexpr bool representable(Value v, Granularity g) noexcept { return v <= max_value(g); }

inline void require_representable(Value v, Granularity g) {
  if (!representable(v, g)) {
    fail(Errc::Overflow, "value " + std::to_string(v) + " does not fit in " + std::to_string(width(g)) + " byte(s)");
  }
}

inline void store_le(std::span<std::uint8_t> out, Value v) noexcept {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

inline Value load_le(std::span<const std::uint8_t> in) noexcept {
  Value v = 0;
  for (std::size_t i = 0; i < in.size(); ++i) v |= Value{in[i]} << (8 * i);
  return v;
}

// Little-endian append-only encoder used by code lines, value records and snapshots.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void raw(std::span<const std::uint8_t> bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }
  void raw(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    raw(s);
  }
  void bytes(std::span<const std::uint8_t> b) {
    u64(b.size());
    raw(b);
  }

  const std::vector<std::uint8_t>& data() const noexcept { return buf_; }
  std::vector<std::uint8_t> take() noexcept { return std::move(buf_); }

 private:
  void put(std::uint64_t v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  /// `errc` is raised on truncation; snapshots use Io, in-memory decoders use Parse.
  explicit ByteReader(std::span<const std::uint8_t> in, Errc errc = Errc::Parse) : in_(in), errc_(errc) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::string str() {
    auto n = u32();
    auto s = take(n);
    return {s.begin(), s.end()};
  }
  std::vector<std::uint8_t> bytes() {
    auto n = u64();
    auto s = take(n);
    return {s.begin(), s.end()};
  }
  std::span<const std::uint8_t> take(std::uint64_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const noexcept { return pos_ == in_.size(); }
  std::size_t position() const noexcept { return pos_; }

 private:
  void need(std::uint64_t n) const {
    if (n > in_.size() - pos_) fail(errc_, "truncated input at byte " + std::to_string(pos_));
  }
  std::uint64_t get(std::size_t n) {
    auto s = take(n);
    return load_le(s);
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  Errc errc_;
};

}  // namespace pinvsm
