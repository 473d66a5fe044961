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

#include <cctype>
#include <charconv>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pinvsm/alu.hpp"
#include "pinvsm/bytes.hpp"
#include "pinvsm/error.hpp"

namespace pinvsm {

/// Unused operand slot, written "_".
struct NoOperand {
  bool operator==(const NoOperand&) const = default;
};

/// Register window W<index>, private to each conveyor slot.
struct WindowRef {
  std::uint32_t index = 0;
  bool operator==(const WindowRef&) const = default;
};

/// Element of a bound data line: L<line>[<index>] or L<line>[ROW].
struct LineElem {
  std::uint32_t line = 0;
  std::optional<std::uint32_t> index;  // nullopt means ROW
  bool is_row() const noexcept { return !index.has_value(); }
  bool operator==(const LineElem&) const = default;
};

struct Imm {
  Value value = 0;
  bool operator==(const Imm&) const = default;
};

using Operand = std::variant<NoOperand, WindowRef, LineElem, Imm>;

struct Command {
  Opcode opcode = Opcode::Copy;
  Operand a;
  Operand b;
  Operand dst;
  Granularity granularity = Granularity::B4;

  bool operator==(const Command&) const = default;
};

struct Stage {
  std::string label;
  Command command;
  bool over_rows = false;

  bool operator==(const Stage&) const = default;
};

/// A straight-line program: one command per conveyor stage.
struct CodeLine {
  std::string name;
  std::vector<Stage> stages;

  bool operator==(const CodeLine&) const = default;
};

inline bool uses_row(const Operand& op) noexcept {
  const auto* le = std::get_if<LineElem>(&op);
  return le != nullptr && le->is_row();
}

inline bool uses_row(const Command& c) noexcept { return uses_row(c.a) || uses_row(c.b) || uses_row(c.dst); }

/// Checks the structural rules every stage must obey, whatever its origin.
inline void validate_stage(const Stage& st) {
  const auto& c = st.command;
  if (!std::holds_alternative<WindowRef>(c.dst) && !std::holds_alternative<LineElem>(c.dst)) {
    fail(Errc::BadOperand, "stage '" + st.label + "': destination must be a window or line element");
  }
  for (const Operand* op : {&c.a, &c.b}) {
    if (const auto* imm = std::get_if<Imm>(op)) require_representable(imm->value, c.granularity);
  }
  for (const Operand* op : {&c.a, &c.b, &c.dst}) {
    if (const auto* le = std::get_if<LineElem>(op); le && le->index == std::numeric_limits<std::uint32_t>::max()) {
      fail(Errc::OutOfBounds, "stage '" + st.label + "': line index too large");
    }
  }
  if (uses_row(c) && !st.over_rows) fail(Errc::BadOperand, "stage '" + st.label + "': ROW index requires @rows");
  if (st.over_rows && !uses_row(c)) fail(Errc::BadOperand, "stage '" + st.label + "': @rows without a ROW operand");
}

// ---------------------------------------------------------------------------
// Text form

inline std::string to_string(const Operand& op) {
  struct V {
    std::string operator()(const NoOperand&) const { return "_"; }
    std::string operator()(const WindowRef& w) const { return "W" + std::to_string(w.index); }
    std::string operator()(const LineElem& l) const {
      return "L" + std::to_string(l.line) + "[" + (l.is_row() ? std::string("ROW") : std::to_string(*l.index)) + "]";
    }
    std::string operator()(const Imm& i) const { return std::to_string(i.value); }
  };
  return std::visit(V{}, op);
}

inline std::string disassemble(const Stage& st) {
  const auto& c = st.command;
  std::string out = st.label + ": " + std::string(opcode_name(c.opcode)) + "." + std::to_string(width(c.granularity)) + " " +
                    to_string(c.a) + ", " + to_string(c.b) + " -> " + to_string(c.dst);
  if (st.over_rows) out += " @rows";
  return out;
}

inline std::string disassemble(const CodeLine& code) {
  std::string out;
  for (const auto& st : code.stages) out += disassemble(st) + "\n";
  return out;
}

namespace detail {

class StageParser {
 public:
  StageParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  Stage parse() {
    Stage st;
    st.label = identifier("label");
    expect(':');
    const auto col = pos_;
    auto op = parse_opcode(word());
    if (!op) error("unknown opcode", col);
    st.command.opcode = *op;
    expect('.');
    const auto gcol = pos_;
    auto g = number("granularity");
    if (g != 1 && g != 2 && g != 4 && g != 8) {
      fail(Errc::BadGranularity, where(gcol) + "granularity " + std::to_string(g) + " not in {1,2,4,8}");
    }
    st.command.granularity = make_granularity(g);
    st.command.a = operand();
    expect(',');
    st.command.b = operand();
    expect('-');
    if (peek() != '>') error("expected '->'", pos_);
    ++pos_;
    st.command.dst = operand();
    skip_ws();
    if (peek() == '@') {
      ++pos_;
      const auto rcol = pos_;
      if (word() != "rows") error("expected '@rows'", rcol);
      st.over_rows = true;
    }
    skip_ws();
    if (pos_ != text_.size()) error("unexpected trailing input", pos_);
    validate_stage(st);
    return st;
  }

 private:
  std::string where(std::size_t col) const {
    return "line " + std::to_string(line_) + ", column " + std::to_string(col + 1) + ": ";
  }
  [[noreturn]] void error(const std::string& msg, std::size_t col) const { fail(Errc::Parse, where(col) + msg); }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    skip_ws();
    if (peek() != c) error(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  std::string_view word() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::string identifier(const char* what) {
    skip_ws();
    const auto col = pos_;
    auto w = word();
    if (w.empty() || std::isdigit(static_cast<unsigned char>(w.front()))) error(std::string("expected ") + what, col);
    return std::string(w);
  }

  std::uint64_t number(const char* what) {
    skip_ws();
    const auto col = pos_;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec == std::errc::result_out_of_range) fail(Errc::Overflow, where(col) + "literal out of range");
    if (ec != std::errc()) error(std::string("expected ") + what, col);
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  std::uint32_t index32(const char* what) {
    const auto col = pos_;
    auto v = number(what);
    if (v >= std::numeric_limits<std::uint32_t>::max()) error(std::string(what) + " too large", col);
    return static_cast<std::uint32_t>(v);
  }

  Operand operand() {
    skip_ws();
    const auto col = pos_;
    const char c = peek();
    if (c == '_') {
      ++pos_;
      return NoOperand{};
    }
    if (c == 'W') {
      ++pos_;
      return WindowRef{index32("window index")};
    }
    if (c == 'L') {
      ++pos_;
      LineElem le;
      le.line = index32("line id");
      expect('[');
      skip_ws();
      if (text_.substr(pos_, 3) == "ROW") {
        pos_ += 3;
      } else {
        le.index = index32("element index");
      }
      expect(']');
      return le;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return Imm{number("immediate")};
    error("expected operand", col);
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Assembles one stage per non-blank line; '#' starts a comment.
inline CodeLine assemble(std::string_view source, std::string name = {}) {
  CodeLine code;
  code.name = std::move(name);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= source.size()) {
    auto end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    auto line = source.substr(start, end - start);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      code.stages.push_back(detail::StageParser(line, line_no).parse());
    }
    start = end + 1;
  }
  if (code.stages.empty()) fail(Errc::Parse, "line " + std::to_string(line_no) + ", column 1: empty program");
  return code;
}

// ---------------------------------------------------------------------------
// Binary form, as stored in NVM and moved between DPUs.
//
//   u16 stage count, u16 name length, name bytes
//   per stage: u8 label length, label bytes, u8 opcode, u8 granularity,
//              u8 flags (bit 0 = @rows), then a, b, dst as (u8 kind, u64 payload)
//
// Operand payloads: window index; line id | element index << 32 (ROW =
// 0xFFFFFFFF); immediate value; 0 for an unused slot.

namespace detail {

inline constexpr std::uint32_t kRowIndex = std::numeric_limits<std::uint32_t>::max();

inline void encode_operand(ByteWriter& w, const Operand& op) {
  w.u8(static_cast<std::uint8_t>(op.index()));
  struct V {
    std::uint64_t operator()(const NoOperand&) const { return 0; }
    std::uint64_t operator()(const WindowRef& x) const { return x.index; }
    std::uint64_t operator()(const LineElem& x) const {
      return std::uint64_t{x.line} | (std::uint64_t{x.index.value_or(kRowIndex)} << 32);
    }
    std::uint64_t operator()(const Imm& x) const { return x.value; }
  };
  w.u64(std::visit(V{}, op));
}

inline Operand decode_operand(ByteReader& r) {
  const auto kind = r.u8();
  const auto payload = r.u64();
  switch (kind) {
    case 0: return NoOperand{};
    case 1:
      if (payload > kRowIndex) fail(Errc::Parse, "window index out of range");
      return WindowRef{static_cast<std::uint32_t>(payload)};
    case 2: {
      LineElem le;
      le.line = static_cast<std::uint32_t>(payload);
      const auto idx = static_cast<std::uint32_t>(payload >> 32);
      if (idx != kRowIndex) le.index = idx;
      return le;
    }
    case 3: return Imm{payload};
    default: fail(Errc::Parse, "bad operand kind " + std::to_string(kind));
  }
}

}  // namespace detail

inline std::vector<std::uint8_t> encode(const CodeLine& code) {
  if (code.stages.size() > 0xFFFF || code.name.size() > 0xFFFF) fail(Errc::Overflow, "code line too large to encode");
  ByteWriter w;
  w.u16(static_cast<std::uint16_t>(code.stages.size()));
  w.u16(static_cast<std::uint16_t>(code.name.size()));
  w.raw(code.name);
  for (const auto& st : code.stages) {
    if (st.label.size() > 0xFF) fail(Errc::Overflow, "label too long: " + st.label);
    w.u8(static_cast<std::uint8_t>(st.label.size()));
    w.raw(st.label);
    w.u8(static_cast<std::uint8_t>(st.command.opcode));
    w.u8(static_cast<std::uint8_t>(width(st.command.granularity)));
    w.u8(st.over_rows ? 1 : 0);
    detail::encode_operand(w, st.command.a);
    detail::encode_operand(w, st.command.b);
    detail::encode_operand(w, st.command.dst);
  }
  return w.take();
}

inline std::size_t encoded_size(const CodeLine& code) {
  std::size_t n = 4 + code.name.size();
  for (const auto& st : code.stages) n += 31 + st.label.size();
  return n;
}

inline CodeLine decode_code(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  CodeLine code;
  const auto stages = r.u16();
  const auto name_len = r.u16();
  auto name = r.take(name_len);
  code.name.assign(name.begin(), name.end());
  for (std::uint16_t i = 0; i < stages; ++i) {
    Stage st;
    auto label = r.take(r.u8());
    st.label.assign(label.begin(), label.end());
    const auto op = r.u8();
    if (op >= kOpcodeNames.size()) fail(Errc::Parse, "bad opcode byte");
    st.command.opcode = static_cast<Opcode>(op);
    st.command.granularity = make_granularity(r.u8());
    st.over_rows = (r.u8() & 1) != 0;
    st.command.a = detail::decode_operand(r);
    st.command.b = detail::decode_operand(r);
    st.command.dst = detail::decode_operand(r);
    validate_stage(st);
    code.stages.push_back(std::move(st));
  }
  if (!r.done()) fail(Errc::Parse, "trailing bytes after code line");
  if (code.stages.empty()) fail(Errc::Parse, "empty code line");
  return code;
}

}  // namespace pinvsm
