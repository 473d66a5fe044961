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
#include <set>
#include <utility>
#include <vector>

#include "pinvsm/alu.hpp"
#include "pinvsm/bytes.hpp"
#include "pinvsm/counters.hpp"
#include "pinvsm/error.hpp"
#include "pinvsm/table.hpp"

namespace pinvsm {

inline constexpr std::uint64_t kCacheLineBytes = 64;

struct BaselineConfig {
  std::uint32_t registers = 16;
  std::uint32_t cache_lines = 64;
  std::uint32_t ways = 0;  // 0 = fully associative

  bool operator==(const BaselineConfig&) const = default;
};

// Set-associative cache of 64-byte blocks with LRU replacement.
class LruCache {
 public:
  LruCache(std::uint32_t lines, std::uint32_t ways) {
    if (lines == 0) fail(Errc::Config, "cache needs at least one line");
    ways_ = ways == 0 ? lines : ways;
    if (ways_ > lines || lines % ways_ != 0) fail(Errc::Config, "cache lines must be a multiple of the associativity");
    sets_.assign(lines / ways_, {});
  }

  /// Touches `block`; returns true on a hit. A miss installs the block.
  bool access(std::uint64_t block) {
    auto& set = sets_[block % sets_.size()];
    ++now_;
    for (auto& e : set) {
      if (e.block == block) {
        e.last_use = now_;
        return true;
      }
    }
    if (set.size() < ways_) {
      set.push_back({block, now_});
    } else {
      auto victim = set.begin();
      for (auto it = set.begin(); it != set.end(); ++it)
        if (it->last_use < victim->last_use) victim = it;
      *victim = {block, now_};
    }
    return false;
  }

 private:
  struct Entry {
    std::uint64_t block;
    std::uint64_t last_use;
  };
  std::uint32_t ways_ = 1;
  std::uint64_t now_ = 0;
  std::vector<std::vector<Entry>> sets_;
};

/**
 * CPU-centric reference machine: registers, one cache level, DRAM and
 * storage. Every ALU operand is filled into a register first; a fill of
 * width g costs g bytes cache->register, plus a 64-byte line from DRAM on
 * a cache miss, plus a 64-byte line from storage on first DRAM touch.
 */
class BaselineMachine {
 public:
  explicit BaselineMachine(BaselineConfig cfg = {}) : cfg_(cfg), cache_(cfg.cache_lines, cfg.ways) {
    if (cfg.registers < 2) fail(Errc::Config, "baseline needs at least 2 registers");
  }

  const BaselineConfig& config() const noexcept { return cfg_; }
  const BaselineCounters& counters() const noexcept { return counters_; }

  void fill_register(std::uint64_t address, Granularity g) {
    const std::uint64_t block = address / kCacheLineBytes;
    counters_.cache_to_reg_bytes += width(g);
    if (cache_.access(block)) return;
    counters_.dram_to_cache_bytes += kCacheLineBytes;
    if (dram_.insert(block).second) counters_.storage_to_dram_bytes += kCacheLineBytes;
  }

  Value alu(Opcode op, Value a, Value b, Granularity g) {
    ++counters_.alu_ops;
    return alu_apply(op, a, b, g);
  }

 private:
  BaselineConfig cfg_;
  LruCache cache_;
  std::set<std::uint64_t> dram_;
  BaselineCounters counters_;
};

/**
 * Scalar column-sum loop over a row-major table that starts in storage at
 * address 0. Sums wrap modulo 256^g, like the accumulator register.
 */
inline std::pair<std::vector<Value>, BaselineCounters> baseline_column_sum(BaselineMachine& machine, const Table& table,
                                                                           Granularity g) {
  check_table(table, g);
  const std::size_t cols = table.headers.size();
  std::vector<Value> sums(cols, 0);
  for (std::size_t c = 0; c < cols; ++c) {
    Value acc = 0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      machine.fill_register((r * cols + c) * width(g), g);
      acc = machine.alu(Opcode::Add, acc, table.rows[r][c], g);
    }
    sums[c] = acc;
  }
  return {sums, machine.counters()};
}

}  // namespace pinvsm
