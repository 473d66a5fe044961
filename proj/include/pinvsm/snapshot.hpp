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
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "pinvsm/array.hpp"
#include "pinvsm/bytes.hpp"
#include "pinvsm/config.hpp"
#include "pinvsm/error.hpp"
#include "pinvsm/ingest.hpp"

namespace pinvsm {

inline constexpr std::string_view kSnapshotMagic = "PINVSM1\n";
inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Everything a session persists between commands.
struct Session {
  Config config;
  StopwordList stopwords;
  std::uint64_t next_message = 0;
  DpuArray array;
};

/*
 * Layout (little-endian):
 *   "PINVSM1\n", u32 version,
 *   config: u32 N, u64 capacity, u8 granularity, u8 has-stopword-path [+ str],
 *           u64 seed, u32 registers, u32 cache lines, u32 ways,
 *           u32 weight count + (str name, i64 num, i64 den)*
 *   u64 stopword count + str*, u64 next message id,
 *   array: DPUs (id, capacity, raw NVM, allocation table, line table,
 *          queue, code cache, counters), directory, columns, methods,
 *          array counters, clock, next code id
 */
inline std::vector<std::uint8_t> save_snapshot(const Session& s) {
  ByteWriter w;
  w.raw(kSnapshotMagic);
  w.u32(kSnapshotVersion);
  const auto& c = s.config;
  w.u32(c.array_size);
  w.u64(c.dpu_capacity);
  w.u8(static_cast<std::uint8_t>(width(c.granularity)));
  w.u8(c.stopwords_path ? 1 : 0);
  if (c.stopwords_path) w.str(*c.stopwords_path);
  w.u64(c.seed);
  w.u32(c.baseline.registers);
  w.u32(c.baseline.cache_lines);
  w.u32(c.baseline.ways);
  const auto& weights = c.weights.explicit_weights();
  w.u32(static_cast<std::uint32_t>(weights.size()));
  for (const auto& [name, r] : weights) {
    w.str(name);
    w.u64(static_cast<std::uint64_t>(r.numerator()));
    w.u64(static_cast<std::uint64_t>(r.denominator()));
  }
  w.u64(s.stopwords.size());
  for (const auto& sw : s.stopwords) w.str(sw);
  w.u64(s.next_message);
  s.array.save(w);
  return w.take();
}

inline Session load_snapshot(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, Errc::Io);
  const auto magic = r.take(kSnapshotMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kSnapshotMagic.begin())) fail(Errc::Io, "not a snapshot (bad magic)");
  if (const auto v = r.u32(); v != kSnapshotVersion) fail(Errc::Io, "unsupported snapshot version " + std::to_string(v));
  Session s;
  auto& c = s.config;
  c.array_size = r.u32();
  c.dpu_capacity = r.u64();
  c.granularity = make_granularity(r.u8());
  if (r.u8() != 0) c.stopwords_path = r.str();
  c.seed = r.u64();
  c.baseline.registers = r.u32();
  c.baseline.cache_lines = r.u32();
  c.baseline.ways = r.u32();
  const auto nweights = r.u32();
  for (std::uint32_t i = 0; i < nweights; ++i) {
    auto name = r.str();
    const auto num = static_cast<std::int64_t>(r.u64());
    const auto den = static_cast<std::int64_t>(r.u64());
    if (den <= 0) fail(Errc::Io, "corrupt weight");
    c.weights.set(name, Rational(num, den));
  }
  const auto nstop = r.u64();
  for (std::uint64_t i = 0; i < nstop; ++i) s.stopwords.insert(r.str());
  s.next_message = r.u64();
  s.array = DpuArray::load(r);
  if (!r.done()) fail(Errc::Io, "trailing bytes in snapshot");
  if (s.array.size() != c.array_size) fail(Errc::Io, "snapshot array size mismatch");
  return s;
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::Io, "cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes to a sibling temporary file, then renames over `path`.
inline void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::Io, "cannot write '" + tmp.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(Errc::Io, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(Errc::Io, "cannot rename onto '" + path.string() + "': " + ec.message());
}

inline void save_session_file(const Session& s, const std::filesystem::path& path) {
  write_file_atomic(path, save_snapshot(s));
}

inline Session load_session_file(const std::filesystem::path& path) { return load_snapshot(read_file(path)); }

}  // namespace pinvsm
