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
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pinvsm/alu.hpp"
#include "pinvsm/bytes.hpp"
#include "pinvsm/counters.hpp"
#include "pinvsm/error.hpp"
#include "pinvsm/isa.hpp"
#include "pinvsm/nvm.hpp"
#include "pinvsm/schedule.hpp"

namespace pinvsm {

using DpuId = std::uint32_t;
using LineId = std::uint64_t;
using RequestId = std::uint64_t;
using CodeId = std::uint64_t;

enum class LineKind : std::uint8_t {
  Data,    // typed items, e.g. a table column
  Record,  // encoded keyword value record (granularity 1)
  Code,    // encoded code line (granularity 1)
};

/// A typed array of items resident in NVM. Item i occupies
/// [offset + i*g, offset + (i+1)*g), little-endian unsigned.
struct DataLine {
  LineId id = 0;
  LineKind kind = LineKind::Data;
  Granularity granularity = Granularity::B1;
  std::uint64_t count = 0;
  Offset offset = 0;
  std::optional<std::string> binding;
  CodeId code_id = 0;

  std::uint64_t byte_length() const noexcept { return width(granularity) * count; }
  bool operator==(const DataLine&) const = default;
};

/// An ALU register living inside NVM.
struct RegisterWindow {
  Offset offset = 0;
  Granularity granularity = Granularity::B1;
  bool operator==(const RegisterWindow&) const = default;
};

using WindowSet = std::map<std::uint32_t, RegisterWindow>;

/// Maps a code line's logical line number (L<n>) to a line in the DPU's table.
using SlotBinding = std::map<std::uint32_t, LineId>;

/// Progress of one conveyor run; persisted with the queue.
struct ConveyorState {
  CodeId code_id = 0;
  std::vector<SlotBinding> slots;
  ConveyorMode mode = ConveyorMode::Pipelined;
  bool started = false;
  std::uint64_t next_tick = 0;
  std::uint64_t ops = 0;
  std::vector<WindowSet> windows;  // one set per slot, allocated on start

  bool operator==(const ConveyorState&) const = default;
};

struct StorePairRequest {
  std::string keyword;
  std::vector<std::uint8_t> record;
  bool operator==(const StorePairRequest&) const = default;
};

struct ReadItemsRequest {
  LineId line = 0;
  std::uint64_t start = 0;
  std::uint64_t count = 0;
  bool operator==(const ReadItemsRequest&) const = default;
};

struct Request {
  RequestId id = 0;
  std::variant<StorePairRequest, ConveyorState, ReadItemsRequest> payload;
  bool operator==(const Request&) const = default;
};

/// Final register-window values of one conveyor slot.
using SlotResult = std::map<std::uint32_t, Value>;

struct ConveyorOutcome {
  std::vector<SlotResult> results;
  std::uint64_t ticks = 0;
  std::uint64_t ops = 0;
  std::optional<Error> error;  // set when the run aborted; ticks/ops are partial
};

struct Completion {
  RequestId id = 0;
  LineId line = 0;                 // store-pair
  std::vector<Value> values;       // read-items
  ConveyorOutcome conveyor;        // invoke-code
  std::optional<Error> error;
};

/**
 * One Data Processing Unit: an NVM space plus an elementary ALU.
 *
 * Requests are served strictly in arrival order, one coarse tick per
 * step(). Register windows, data lines and code lines all live in the
 * same NVM space; there is no cache between them and the ALU.
 */
class Dpu {
 public:
  Dpu() = default;
  Dpu(DpuId id, std::uint64_t capacity) : id_(id), nvm_(capacity) {}

  DpuId id() const noexcept { return id_; }
  const NvmSpace& nvm() const noexcept { return nvm_; }
  const CounterBlock& counters() const noexcept { return counters_; }
  const std::map<LineId, DataLine>& lines() const noexcept { return lines_; }
  const std::set<CodeId>& code_cache() const noexcept { return code_cache_; }
  const std::deque<Request>& queue() const noexcept { return queue_; }
  bool idle() const noexcept { return queue_.empty(); }

  // -- space -----------------------------------------------------------------

  Offset alloc(std::uint64_t length) { return nvm_.alloc(length, next_owner_++); }
  void free(Offset offset) { nvm_.free(offset); }

  DataLine alloc_data_line(Granularity g, std::uint64_t count, std::optional<std::string> binding = std::nullopt,
                           LineKind kind = LineKind::Data) {
    if (count == 0) fail(Errc::OutOfBounds, "data line needs at least one item");
    if (count > nvm_.capacity() / width(g)) fail(Errc::NoSpace, "data line larger than NVM");
    const LineId id = next_owner_++;
    DataLine line{id, kind, g, count, nvm_.alloc(width(g) * count, id), std::move(binding), 0};
    lines_.emplace(id, line);
    return line;
  }

  DataLine alloc_data_line(std::uint64_t granularity_bytes, std::uint64_t count) {
    return alloc_data_line(make_granularity(granularity_bytes), count);
  }

  void free_line(LineId id) {
    const auto& l = line(id);
    if (l.kind == LineKind::Code) code_cache_.erase(l.code_id);
    nvm_.free(l.offset);
    lines_.erase(id);
  }

  const DataLine& line(LineId id) const {
    auto it = lines_.find(id);
    if (it == lines_.end()) fail(Errc::NoLine, "no line " + std::to_string(id) + " on DPU " + std::to_string(id_));
    return it->second;
  }

  void write_items(LineId id, std::uint64_t start, std::span<const Value> values) {
    const auto& l = line(id);
    check_range(l, start, values.size());
    for (auto v : values) require_representable(v, l.granularity);
    for (std::size_t i = 0; i < values.size(); ++i) nvm_.store(item_offset(l, start + i), l.granularity, values[i]);
  }

  std::vector<Value> read_items(LineId id, std::uint64_t start, std::uint64_t n) const {
    const auto& l = line(id);
    check_range(l, start, n);
    std::vector<Value> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(nvm_.load(item_offset(l, start + i), l.granularity));
    return out;
  }

  std::span<const std::uint8_t> line_bytes(LineId id) const {
    const auto& l = line(id);
    return nvm_.bytes(l.offset, l.byte_length());
  }

  /// Stores an encoded value record as a granularity-1 line bound to `keyword`.
  LineId store_record(const std::string& keyword, std::span<const std::uint8_t> record) {
    auto l = alloc_data_line(Granularity::B1, record.size(), keyword, LineKind::Record);
    std::copy(record.begin(), record.end(), nvm_.bytes(l.offset, l.count).begin());
    return l.id;
  }

  // -- code --------------------------------------------------------------------

  bool has_code(CodeId code) const noexcept { return code_cache_.contains(code); }

  LineId store_code(CodeId code, std::span<const std::uint8_t> encoded, const std::string& name) {
    if (auto existing = code_line(code)) return *existing;
    auto l = alloc_data_line(Granularity::B1, encoded.size(), name, LineKind::Code);
    lines_.at(l.id).code_id = code;
    std::copy(encoded.begin(), encoded.end(), nvm_.bytes(l.offset, l.count).begin());
    code_cache_.insert(code);
    return l.id;
  }

  std::span<const std::uint8_t> code_bytes(CodeId code) const {
    auto id = code_line(code);
    if (!id) fail(Errc::NoCode, "code " + std::to_string(code) + " not resident on DPU " + std::to_string(id_));
    return line_bytes(*id);
  }

  CodeLine load_code(CodeId code) const { return decode_code(code_bytes(code)); }

  // -- ALU -------------------------------------------------------------------

  Value exec_elementary(Opcode op, Value a, Value b, Granularity g) {
    require_representable(a, g);
    require_representable(b, g);
    record(counters_, Counter::IntraDpuOps, 1);
    return alu_apply(op, a, b, g);
  }

  /// Windows referenced by `code`, each as wide as the widest command using it.
  WindowSet alloc_windows(const CodeLine& code) {
    std::map<std::uint32_t, Granularity> widths;
    for (const auto& st : code.stages) {
      for (const Operand* op : {&st.command.a, &st.command.b, &st.command.dst}) {
        if (const auto* w = std::get_if<WindowRef>(op)) {
          auto& g = widths.try_emplace(w->index, st.command.granularity).first->second;
          if (width(st.command.granularity) > width(g)) g = st.command.granularity;
        }
      }
    }
    WindowSet out;
    try {
      for (const auto& [idx, g] : widths) out.emplace(idx, RegisterWindow{alloc(width(g)), g});
    } catch (const Error&) {
      free_windows(out);
      throw;
    }
    return out;
  }

  void free_windows(const WindowSet& windows) {
    for (const auto& [_, w] : windows) nvm_.free(w.offset);
  }

  Value read_window(const RegisterWindow& w) const { return nvm_.load(w.offset, w.granularity); }

  /**
   * Applies one stage: once per row (ROW bound to 0..count-1) when the stage
   * loops over rows, otherwise once. Counts as one coarse tick for the caller.
   * An absent binding means L<n> names line id n directly.
   */
  void execute_stage(const Stage& stage, const WindowSet& windows, const SlotBinding* binding = nullptr) {
    const auto& c = stage.command;
    if (!stage.over_rows) {
      apply(c, windows, binding, 0);
      return;
    }
    std::uint64_t rows = 0;
    for (const Operand* op : {&c.a, &c.b, &c.dst}) {
      if (const auto* le = std::get_if<LineElem>(op); le && le->is_row()) {
        rows = resolve(*le, binding, c.granularity).count;
        break;
      }
    }
    for (std::uint64_t r = 0; r < rows; ++r) apply(c, windows, binding, r);
  }

  // -- queue -----------------------------------------------------------------

  RequestId enqueue(std::variant<StorePairRequest, ConveyorState, ReadItemsRequest> payload) {
    const RequestId id = next_request_++;
    queue_.push_back(Request{id, std::move(payload)});
    return id;
  }

  /// Executes one coarse tick of the head request.
  std::optional<Completion> step() {
    if (queue_.empty()) return std::nullopt;
    record(counters_, Counter::GlobalTicks, 1);
    Request& head = queue_.front();
    Completion done{head.id, 0, {}, {}, std::nullopt};
    bool finished = true;
    try {
      if (auto* sp = std::get_if<StorePairRequest>(&head.payload)) {
        done.line = store_record(sp->keyword, sp->record);
      } else if (auto* rd = std::get_if<ReadItemsRequest>(&head.payload)) {
        done.values = read_items(rd->line, rd->start, rd->count);
      } else {
        auto& cs = std::get<ConveyorState>(head.payload);
        finished = advance_conveyor(cs, done.conveyor);
      }
    } catch (const Error& e) {
      done.error = e;
    }
    if (done.conveyor.error) {
      done.error = done.conveyor.error;
      finished = true;
    }
    if (!finished) return std::nullopt;
    queue_.pop_front();
    return done;
  }

  // -- persistence -----------------------------------------------------------

  void save(ByteWriter& w) const;
  static Dpu load(ByteReader& r);

 private:
  std::optional<LineId> code_line(CodeId code) const {
    if (!code_cache_.contains(code)) return std::nullopt;
    for (const auto& [id, l] : lines_)
      if (l.kind == LineKind::Code && l.code_id == code) return id;
    return std::nullopt;
  }

  static Offset item_offset(const DataLine& l, std::uint64_t index) { return l.offset + index * width(l.granularity); }

  static void check_range(const DataLine& l, std::uint64_t start, std::uint64_t n) {
    if (start > l.count || l.count - start < n) {
      fail(Errc::OutOfBounds, "items [" + std::to_string(start) + ", " + std::to_string(start + n) + ") outside line of " +
                                  std::to_string(l.count));
    }
  }

  const DataLine& resolve(const LineElem& le, const SlotBinding* binding, Granularity g) const {
    LineId id = le.line;
    if (binding) {
      auto it = binding->find(le.line);
      if (it == binding->end()) fail(Errc::NoLine, "L" + std::to_string(le.line) + " is not bound");
      id = it->second;
    }
    const auto& l = line(id);
    if (l.kind == LineKind::Code) fail(Errc::NoLine, "line " + std::to_string(id) + " holds code");
    if (l.granularity != g) {
      fail(Errc::BadGranularity, "line " + std::to_string(id) + " has granularity " + std::to_string(width(l.granularity)) +
                                     ", command uses " + std::to_string(width(g)));
    }
    return l;
  }

  Offset element_offset(const LineElem& le, const SlotBinding* binding, Granularity g, std::uint64_t row) const {
    const auto& l = resolve(le, binding, g);
    const std::uint64_t index = le.is_row() ? row : *le.index;
    if (index >= l.count) {
      fail(Errc::OutOfBounds, "index " + std::to_string(index) + " outside line of " + std::to_string(l.count));
    }
    return item_offset(l, index);
  }

  const RegisterWindow& window(const WindowSet& windows, std::uint32_t index) const {
    auto it = windows.find(index);
    if (it == windows.end()) fail(Errc::BadOperand, "window W" + std::to_string(index) + " not allocated");
    return it->second;
  }

  Value fetch(const Operand& op, const WindowSet& windows, const SlotBinding* binding, Granularity g,
              std::uint64_t row) const {
    if (const auto* w = std::get_if<WindowRef>(&op)) return read_window(window(windows, w->index));
    if (const auto* le = std::get_if<LineElem>(&op)) return nvm_.load(element_offset(*le, binding, g, row), g);
    if (const auto* imm = std::get_if<Imm>(&op)) return imm->value;
    return 0;
  }

  void apply(const Command& c, const WindowSet& windows, const SlotBinding* binding, std::uint64_t row) {
    const Value a = fetch(c.a, windows, binding, c.granularity, row);
    const Value b = fetch(c.b, windows, binding, c.granularity, row);
    const Value v = exec_elementary(c.opcode, a, b, c.granularity);
    if (const auto* w = std::get_if<WindowRef>(&c.dst)) {
      const auto& win = window(windows, w->index);
      nvm_.store(win.offset, win.granularity, v);
    } else {
      const auto& le = std::get<LineElem>(c.dst);
      nvm_.store(element_offset(le, binding, c.granularity, row), c.granularity, v);
    }
  }

  // Runs the schedule entries of one tick; true when the run has finished.
  bool advance_conveyor(ConveyorState& cs, ConveyorOutcome& out) {
    const CodeLine code = load_code(cs.code_id);
    const auto stages = static_cast<std::uint32_t>(code.stages.size());
    const auto slots = static_cast<std::uint32_t>(cs.slots.size());
    const auto ops_before = counters_.intra_dpu_ops;
    try {
      if (!cs.started) {
        cs.windows.reserve(slots);
        for (std::uint32_t d = 0; d < slots; ++d) cs.windows.push_back(alloc_windows(code));
        cs.started = true;
      }
      for (const auto& e : entries_at(cs.mode, stages, slots, cs.next_tick)) {
        execute_stage(code.stages[e.stage], cs.windows[e.slot], &cs.slots[e.slot]);
      }
    } catch (const Error& e) {
      cs.ops += counters_.intra_dpu_ops - ops_before;
      ++cs.next_tick;
      out.error = e;
      out.ticks = cs.next_tick;
      out.ops = cs.ops;
      release(cs);
      return true;
    }
    cs.ops += counters_.intra_dpu_ops - ops_before;
    ++cs.next_tick;
    if (cs.next_tick < std::max<std::uint64_t>(1, schedule_ticks(cs.mode, stages, slots))) return false;
    out.ticks = cs.next_tick;
    out.ops = cs.ops;
    for (const auto& ws : cs.windows) {
      SlotResult r;
      for (const auto& [idx, w] : ws) r.emplace(idx, read_window(w));
      out.results.push_back(std::move(r));
    }
    release(cs);
    return true;
  }

  static std::uint64_t schedule_ticks(ConveyorMode mode, std::uint32_t stages, std::uint32_t slots) {
    return ConveyorSchedule{mode, stages, slots, {}}.total_ticks();
  }

  void release(ConveyorState& cs) {
    for (const auto& ws : cs.windows) free_windows(ws);
    cs.windows.clear();
  }

  DpuId id_ = 0;
  NvmSpace nvm_;
  std::map<LineId, DataLine> lines_;
  std::deque<Request> queue_;
  std::set<CodeId> code_cache_;
  CounterBlock counters_;
  RequestId next_request_ = 0;
  OwnerId next_owner_ = 0;
};

/**
 * Runs `code` over `slots` on one DPU without going through the request
 * queue. The code need not be resident. Each slot gets private register
 * windows; both modes produce identical window values.
 */
inline ConveyorOutcome run_conveyor(Dpu& dpu, const CodeLine& code, const std::vector<SlotBinding>& slots,
                                    ConveyorMode mode) {
  ConveyorOutcome out;
  const auto stages = static_cast<std::uint32_t>(code.stages.size());
  const auto n = static_cast<std::uint32_t>(slots.size());
  const auto ops_before = dpu.counters().intra_dpu_ops;
  std::vector<WindowSet> windows;
  const auto release = [&] {
    for (const auto& ws : windows) dpu.free_windows(ws);
  };
  const std::uint64_t ticks = std::max<std::uint64_t>(1, ConveyorSchedule{mode, stages, n, {}}.total_ticks());
  try {
    for (std::uint32_t d = 0; d < n; ++d) windows.push_back(dpu.alloc_windows(code));
    for (std::uint64_t t = 0; t < ticks; ++t) {
      out.ticks = t + 1;
      for (const auto& e : entries_at(mode, stages, n, t)) {
        dpu.execute_stage(code.stages[e.stage], windows[e.slot], &slots[e.slot]);
      }
    }
  } catch (const Error& e) {
    out.error = e;
    out.ops = dpu.counters().intra_dpu_ops - ops_before;
    release();
    return out;
  }
  out.ops = dpu.counters().intra_dpu_ops - ops_before;
  for (const auto& ws : windows) {
    SlotResult r;
    for (const auto& [idx, w] : ws) r.emplace(idx, dpu.read_window(w));
    out.results.push_back(std::move(r));
  }
  release();
  return out;
}

// -- persistence --------------------------------------------------------------

namespace detail {

inline void save_counters(ByteWriter& w, const CounterBlock& c) {
  for (const auto& [_, v] : c.fields()) w.u64(v);
}

inline CounterBlock load_counters(ByteReader& r) {
  CounterBlock c;
  c.host_to_array_bytes = r.u64();
  c.array_to_host_bytes = r.u64();
  c.inter_dpu_bytes = r.u64();
  c.intra_dpu_ops = r.u64();
  c.global_ticks = r.u64();
  return c;
}

inline void save_windows(ByteWriter& w, const WindowSet& ws) {
  w.u32(static_cast<std::uint32_t>(ws.size()));
  for (const auto& [idx, win] : ws) {
    w.u32(idx);
    w.u64(win.offset);
    w.u8(static_cast<std::uint8_t>(width(win.granularity)));
  }
}

inline WindowSet load_windows(ByteReader& r) {
  WindowSet ws;
  const auto n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto idx = r.u32();
    const auto off = r.u64();
    ws.emplace(idx, RegisterWindow{off, make_granularity(r.u8())});
  }
  return ws;
}

inline void save_binding(ByteWriter& w, const SlotBinding& b) {
  w.u32(static_cast<std::uint32_t>(b.size()));
  for (const auto& [k, v] : b) {
    w.u32(k);
    w.u64(v);
  }
}

inline SlotBinding load_binding(ByteReader& r) {
  SlotBinding b;
  const auto n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto k = r.u32();
    b.emplace(k, r.u64());
  }
  return b;
}

}  // namespace detail

inline void Dpu::save(ByteWriter& w) const {
  w.u32(id_);
  w.u64(nvm_.capacity());
  w.raw(nvm_.content());
  const auto allocs = nvm_.allocations();
  w.u64(allocs.size());
  for (const auto& a : allocs) {
    w.u64(a.offset);
    w.u64(a.length);
    w.u64(a.owner);
  }
  w.u64(lines_.size());
  for (const auto& [id, l] : lines_) {
    w.u64(id);
    w.u8(static_cast<std::uint8_t>(l.kind));
    w.u8(static_cast<std::uint8_t>(width(l.granularity)));
    w.u64(l.count);
    w.u64(l.offset);
    w.u8(l.binding ? 1 : 0);
    if (l.binding) w.str(*l.binding);
    w.u64(l.code_id);
  }
  w.u64(queue_.size());
  for (const auto& req : queue_) {
    w.u64(req.id);
    w.u8(static_cast<std::uint8_t>(req.payload.index()));
    if (const auto* sp = std::get_if<StorePairRequest>(&req.payload)) {
      w.str(sp->keyword);
      w.bytes(sp->record);
    } else if (const auto* rd = std::get_if<ReadItemsRequest>(&req.payload)) {
      w.u64(rd->line);
      w.u64(rd->start);
      w.u64(rd->count);
    } else {
      const auto& cs = std::get<ConveyorState>(req.payload);
      w.u64(cs.code_id);
      w.u8(static_cast<std::uint8_t>(cs.mode));
      w.u8(cs.started ? 1 : 0);
      w.u64(cs.next_tick);
      w.u64(cs.ops);
      w.u32(static_cast<std::uint32_t>(cs.slots.size()));
      for (const auto& b : cs.slots) detail::save_binding(w, b);
      w.u32(static_cast<std::uint32_t>(cs.windows.size()));
      for (const auto& ws : cs.windows) detail::save_windows(w, ws);
    }
  }
  w.u64(code_cache_.size());
  for (auto c : code_cache_) w.u64(c);
  detail::save_counters(w, counters_);
  w.u64(next_request_);
  w.u64(next_owner_);
}

inline Dpu Dpu::load(ByteReader& r) {
  Dpu d;
  d.id_ = r.u32();
  const auto capacity = r.u64();
  auto raw = r.take(capacity);
  std::vector<std::uint8_t> content(raw.begin(), raw.end());
  std::vector<Allocation> allocs(r.u64());
  for (auto& a : allocs) {
    a.offset = r.u64();
    a.length = r.u64();
    a.owner = r.u64();
  }
  d.nvm_ = NvmSpace::restore(std::move(content), allocs);
  const auto nlines = r.u64();
  for (std::uint64_t i = 0; i < nlines; ++i) {
    DataLine l;
    l.id = r.u64();
    const auto kind = r.u8();
    if (kind > 2) fail(Errc::Io, "corrupt line kind");
    l.kind = static_cast<LineKind>(kind);
    l.granularity = make_granularity(r.u8());
    l.count = r.u64();
    l.offset = r.u64();
    if (r.u8() != 0) l.binding = r.str();
    l.code_id = r.u64();
    d.lines_.emplace(l.id, std::move(l));
  }
  const auto nreq = r.u64();
  for (std::uint64_t i = 0; i < nreq; ++i) {
    Request req;
    req.id = r.u64();
    switch (r.u8()) {
      case 0: {
        StorePairRequest sp;
        sp.keyword = r.str();
        sp.record = r.bytes();
        req.payload = std::move(sp);
        break;
      }
      case 1: {
        ConveyorState cs;
        cs.code_id = r.u64();
        cs.mode = static_cast<ConveyorMode>(r.u8() & 1);
        cs.started = r.u8() != 0;
        cs.next_tick = r.u64();
        cs.ops = r.u64();
        const auto ns = r.u32();
        for (std::uint32_t s = 0; s < ns; ++s) cs.slots.push_back(detail::load_binding(r));
        const auto nw = r.u32();
        for (std::uint32_t s = 0; s < nw; ++s) cs.windows.push_back(detail::load_windows(r));
        req.payload = std::move(cs);
        break;
      }
      case 2: {
        ReadItemsRequest rd;
        rd.line = r.u64();
        rd.start = r.u64();
        rd.count = r.u64();
        req.payload = rd;
        break;
      }
      default: fail(Errc::Io, "corrupt request kind");
    }
    d.queue_.push_back(std::move(req));
  }
  const auto ncode = r.u64();
  for (std::uint64_t i = 0; i < ncode; ++i) d.code_cache_.insert(r.u64());
  d.counters_ = detail::load_counters(r);
  d.next_request_ = r.u64();
  d.next_owner_ = r.u64();
  return d;
}

}  // namespace pinvsm
