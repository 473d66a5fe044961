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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pinvsm/bytes.hpp"

namespace pinvsm {

/// Context of one keyword occurrence: the sentence it appeared in and
/// the token positions (ordinals within the sentence) where it occurs.
struct ValueRecord {
  std::uint64_t message_id = 0;
  std::uint32_t sentence_index = 0;
  std::string sentence;
  std::vector<std::uint32_t> positions;

  bool operator==(const ValueRecord&) const = default;
  auto operator<=>(const ValueRecord&) const = default;
};

// u64 message id, u32 sentence index, u32 length + sentence bytes,
// u32 position count + u32 per position.
inline std::size_t encoded_size(const ValueRecord& r) noexcept { return 20 + r.sentence.size() + 4 * r.positions.size(); }

inline std::vector<std::uint8_t> encode(const ValueRecord& r) {
  ByteWriter w;
  w.u64(r.message_id);
  w.u32(r.sentence_index);
  w.str(r.sentence);
  w.u32(static_cast<std::uint32_t>(r.positions.size()));
  for (auto p : r.positions) w.u32(p);
  return w.take();
}

inline ValueRecord decode_record(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  ValueRecord out;
  out.message_id = r.u64();
  out.sentence_index = r.u32();
  out.sentence = r.str();
  const auto n = r.u32();
  out.positions.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) out.positions.push_back(r.u32());
  if (!r.done()) fail(Errc::Parse, "trailing bytes after value record");
  return out;
}

}  // namespace pinvsm
