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

// Independent reference computations for tests. Nothing here may call
// into the simulator's implementation paths.

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// FNV-1a 64, written from the published definition.
inline std::uint64_t fnv1a(const std::string& s) {
  unsigned __int128 h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h = static_cast<std::uint64_t>(h) ^ c;
    h = (h * 1099511628211ULL) % (static_cast<unsigned __int128>(1) << 64);
  }
  return static_cast<std::uint64_t>(h);
}

// Column sums of a row-major table, modulo 2^(8*bytes).
inline std::vector<std::uint64_t> column_sums(const std::vector<std::vector<std::uint64_t>>& rows, std::size_t cols,
                                              unsigned bytes) {
  std::vector<unsigned __int128> acc(cols, 0);
  for (const auto& r : rows)
    for (std::size_t c = 0; c < cols; ++c) acc[c] += r[c];
  std::vector<std::uint64_t> out;
  for (auto a : acc) {
    out.push_back(bytes == 8 ? static_cast<std::uint64_t>(a)
                             : static_cast<std::uint64_t>(a % (static_cast<unsigned __int128>(1) << (8 * bytes))));
  }
  return out;
}

// Enumerates a pipelined grid: (stage, slot) -> tick, by simulating a
// shift register where each slot enters one tick after the previous.
inline std::map<std::pair<unsigned, unsigned>, unsigned> pipelined_grid(unsigned stages, unsigned slots) {
  std::map<std::pair<unsigned, unsigned>, unsigned> at;
  std::vector<int> stage_of(slots, -1);  // next stage each slot will run, -1 = not entered
  unsigned entered = 0;
  for (unsigned tick = 0; at.size() < stages * slots; ++tick) {
    if (entered < slots) stage_of[entered++] = 0;
    for (unsigned d = 0; d < slots; ++d) {
      if (stage_of[d] < 0 || stage_of[d] >= static_cast<int>(stages)) continue;
      at[{static_cast<unsigned>(stage_of[d]), d}] = tick;
      ++stage_of[d];
    }
  }
  return at;
}

// Sentence-level co-occurrence counts over pre-tokenized sentences.
inline std::map<std::pair<std::string, std::string>, std::uint64_t> cooccurrence(
    const std::vector<std::vector<std::string>>& sentences) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> w;
  for (const auto& s : sentences) {
    std::set<std::string> uniq(s.begin(), s.end());
    for (auto i = uniq.begin(); i != uniq.end(); ++i)
      for (auto j = std::next(i); j != uniq.end(); ++j) {
        ++w[{*i, *j}];
        ++w[{*j, *i}];
      }
  }
  return w;
}

struct BaselineTrace {
  std::uint64_t storage_to_dram = 0;
  std::uint64_t dram_to_cache = 0;
  std::uint64_t cache_to_reg = 0;
  std::uint64_t alu = 0;
};

// Replays the column-major scan over a row-major table against a
// set-associative LRU cache kept as most-recent-first lists.
inline BaselineTrace baseline_trace(std::size_t rows, std::size_t cols, unsigned bytes, std::size_t lines,
                                    std::size_t ways) {
  if (ways == 0) ways = lines;
  std::vector<std::vector<std::uint64_t>> sets(lines / ways);
  std::set<std::uint64_t> seen;
  BaselineTrace t;
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) {
      const std::uint64_t block = (r * cols + c) * bytes / 64;
      auto& set = sets[block % sets.size()];
      t.cache_to_reg += bytes;
      ++t.alu;
      bool hit = false;
      for (std::size_t i = 0; i < set.size(); ++i)
        if (set[i] == block) {
          set.erase(set.begin() + static_cast<long>(i));
          hit = true;
          break;
        }
      set.insert(set.begin(), block);
      if (set.size() > ways) set.pop_back();
      if (hit) continue;
      t.dram_to_cache += 64;
      if (seen.insert(block).second) t.storage_to_dram += 64;
    }
  return t;
}

}  // namespace oracle
