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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "pinvsm/bytes.hpp"

namespace pinvsm {

enum class Opcode : std::uint8_t { Add, Sub, Mul, Min, Max, CmpEq, Copy, SetImm };

inline constexpr std::array<std::string_view, 8> kOpcodeNames = {"ADD", "SUB", "MUL", "MIN", "MAX", "CMP_EQ", "COPY", "SET_IMM"};

constexpr std::string_view opcode_name(Opcode op) noexcept { return kOpcodeNames[static_cast<std::size_t>(op)]; }

constexpr std::optional<Opcode> parse_opcode(std::string_view s) noexcept {
  for (std::size_t i = 0; i < kOpcodeNames.size(); ++i) {
    if (kOpcodeNames[i] == s) return static_cast<Opcode>(i);
  }
  return std::nullopt;
}

// Unsigned modular arithmetic over items of width g.
constexpr Value alu_apply(Opcode op, Value a, Value b, Granularity g) noexcept {
  const Value mask = max_value(g);
  switch (op) {
    case Opcode::Add: return (a + b) & mask;
    case Opcode::Sub: return (a - b) & mask;
    case Opcode::Mul: return (a * b) & mask;
    case Opcode::Min: return a < b ? a : b;
    case Opcode::Max: return a < b ? b : a;
    case Opcode::CmpEq: return a == b ? 1 : 0;
    case Opcode::Copy: return a;
    case Opcode::SetImm: return b;
  }
  return 0;
}

}  // namespace pinvsm
