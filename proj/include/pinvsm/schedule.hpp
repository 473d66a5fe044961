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
#include <string_view>
#include <vector>

namespace pinvsm {

enum class ConveyorMode : std::uint8_t { Pipelined, Sequential };

constexpr std::string_view mode_name(ConveyorMode m) noexcept {
  return m == ConveyorMode::Pipelined ? "pipelined" : "sequential";
}

struct ScheduleEntry {
  std::uint64_t tick = 0;
  std::uint32_t stage = 0;
  std::uint32_t slot = 0;

  bool operator==(const ScheduleEntry&) const = default;
};

/**
 * Assignment of (stage, slot) pairs to coarse ticks.
 *
 * Pipelined: stage s meets slot d at tick s + d, so S stages over D slots
 * finish in S + D - 1 ticks; entries sharing a tick run in ascending slot
 * order. Sequential: slot-major, one pair per tick, S * D ticks.
 */
struct ConveyorSchedule {
  ConveyorMode mode = ConveyorMode::Pipelined;
  std::uint32_t stages = 0;
  std::uint32_t slots = 0;
  std::vector<ScheduleEntry> entries;  // sorted by (tick, slot)

  std::uint64_t total_ticks() const noexcept {
    if (stages == 0 || slots == 0) return 0;
    return mode == ConveyorMode::Pipelined ? std::uint64_t{stages} + slots - 1 : std::uint64_t{stages} * slots;
  }
};

inline std::uint64_t tick_of(ConveyorMode mode, std::uint32_t stages, std::uint32_t stage, std::uint32_t slot) noexcept {
  return mode == ConveyorMode::Pipelined ? std::uint64_t{stage} + slot : std::uint64_t{slot} * stages + stage;
}

inline ConveyorSchedule schedule(std::uint32_t stages, std::uint32_t slots, ConveyorMode mode) {
  ConveyorSchedule out{mode, stages, slots, {}};
  out.entries.reserve(std::size_t{stages} * slots);
  if (mode == ConveyorMode::Sequential) {
    for (std::uint32_t d = 0; d < slots; ++d)
      for (std::uint32_t s = 0; s < stages; ++s) out.entries.push_back({tick_of(mode, stages, s, d), s, d});
    return out;
  }
  // Walk anti-diagonals; within a tick the slot index rises as the stage index falls.
  const std::uint64_t ticks = out.total_ticks();
  for (std::uint64_t t = 0; t < ticks; ++t) {
    const std::uint64_t d_lo = t >= stages ? t - stages + 1 : 0;
    const std::uint64_t d_hi = t < slots ? t : slots - 1;
    for (std::uint64_t d = d_lo; d <= d_hi; ++d) {
      out.entries.push_back({t, static_cast<std::uint32_t>(t - d), static_cast<std::uint32_t>(d)});
    }
  }
  return out;
}

/// Entries executed at one tick, in ascending slot order.
inline std::vector<ScheduleEntry> entries_at(ConveyorMode mode, std::uint32_t stages, std::uint32_t slots,
                                             std::uint64_t tick) {
  std::vector<ScheduleEntry> out;
  if (stages == 0 || slots == 0) return out;
  if (mode == ConveyorMode::Sequential) {
    if (tick < std::uint64_t{stages} * slots) {
      out.push_back({tick, static_cast<std::uint32_t>(tick % stages), static_cast<std::uint32_t>(tick / stages)});
    }
    return out;
  }
  const std::uint64_t d_lo = tick >= stages ? tick - stages + 1 : 0;
  const std::uint64_t d_hi = tick < slots ? tick : slots - 1;
  for (std::uint64_t d = d_lo; d <= d_hi; ++d) {
    out.push_back({tick, static_cast<std::uint32_t>(tick - d), static_cast<std::uint32_t>(d)});
  }
  return out;
}

}  // namespace pinvsm
