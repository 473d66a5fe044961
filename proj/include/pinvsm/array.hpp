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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "pinvsm/counters.hpp"
#include "pinvsm/dpu.hpp"
#include "pinvsm/error.hpp"
#include "pinvsm/hash.hpp"
#include "pinvsm/isa.hpp"
#include "pinvsm/record.hpp"

namespace pinvsm {

/// Home DPU of a keyword: FNV-1a 64 of its UTF-8 bytes, modulo the array size.
inline DpuId place_keyword(std::string_view keyword, std::uint32_t n) {
  if (keyword.empty()) fail(Errc::EmptyKey, "empty keyword");
  if (n == 0) fail(Errc::Config, "array size must be at least 1");
  return static_cast<DpuId>(fnv1a64(keyword) % n);
}

using Neighbor = std::pair<std::string, std::uint64_t>;

/**
 * Keyword -> spill chain, plus symmetric co-occurrence weights.
 *
 * A chain starts at the keyword's home DPU and continues through ring
 * successors; every record stored for the keyword lives on one of them.
 */
struct Directory {
  std::map<std::string, std::vector<DpuId>> chains;
  std::map<std::string, std::map<std::string, std::uint64_t>> relations;

  const std::vector<DpuId>* chain(const std::string& keyword) const {
    auto it = chains.find(keyword);
    return it == chains.end() ? nullptr : &it->second;
  }

  std::uint64_t weight(const std::string& a, const std::string& b) const {
    auto it = relations.find(a);
    if (it == relations.end()) return 0;
    auto jt = it->second.find(b);
    return jt == it->second.end() ? 0 : jt->second;
  }

  /// "keyword<TAB>dpu[,dpu...]" per line, sorted by keyword.
  std::string dump() const {
    std::string out;
    for (const auto& [k, chain] : chains) {
      out += k + "\t";
      for (std::size_t i = 0; i < chain.size(); ++i) out += (i ? "," : "") + std::to_string(chain[i]);
      out += "\n";
    }
    return out;
  }

  bool operator==(const Directory&) const = default;
};

struct ColumnRef {
  std::string keyword;
  DpuId dpu = 0;
  LineId line = 0;
  bool operator==(const ColumnRef&) const = default;
};

struct MethodRef {
  CodeId code = 0;
  DpuId home = 0;
  bool operator==(const MethodRef&) const = default;
};

enum class TickOrder { Forward, Reverse };

struct TickCompletion {
  std::uint64_t clock = 0;  // clock value after the tick in which the request completed
  DpuId dpu = 0;
  Completion completion;
};

struct SlotOutcome {
  LineId line = 0;
  std::string keyword;
  SlotResult windows;
};

struct InvokeResult {
  DpuId dpu = 0;
  std::vector<SlotOutcome> slots;
  std::uint64_t ticks = 0;
  std::uint64_t ops = 0;
  std::uint64_t start_clock = 0;  // clock value before the first tick of the run
  std::uint64_t end_clock = 0;
  std::optional<Error> error;
};

/**
 * The DPU array and its lockstep tick engine.
 *
 * global_tick() is the only place DPUs advance. Code transfers produced
 * during a tick are delivered at the tick boundary, in destination order.
 */
class DpuArray {
 public:
  DpuArray() = default;
  DpuArray(std::uint32_t size, std::uint64_t capacity) {
    if (size == 0) fail(Errc::Config, "array size must be at least 1");
    dpus_.reserve(size);
    for (std::uint32_t i = 0; i < size; ++i) dpus_.emplace_back(i, capacity);
  }

  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(dpus_.size()); }
  const Dpu& dpu(DpuId id) const { return dpus_.at(id); }
  Dpu& dpu(DpuId id) { return dpus_.at(id); }
  const std::vector<Dpu>& dpus() const noexcept { return dpus_; }
  const Directory& directory() const noexcept { return directory_; }
  const std::vector<ColumnRef>& columns() const noexcept { return columns_; }
  const std::map<std::string, MethodRef>& methods() const noexcept { return methods_; }
  std::uint64_t clock() const noexcept { return clock_; }

  /// Array-scope counters: array-level traffic plus every DPU's ALU ops.
  CounterBlock counters() const {
    CounterBlock c = counters_;
    c.intra_dpu_ops = 0;
    for (const auto& d : dpus_) c.intra_dpu_ops += d.counters().intra_dpu_ops;
    return c;
  }

  // -- placement -------------------------------------------------------------

  std::pair<DpuId, LineId> store_pair(const std::string& keyword, const ValueRecord& record) {
    const auto bytes = encode(record);
    auto placed = place_on_chain(keyword, [&](Dpu& d) { return d.store_record(keyword, bytes); });
    record_counter(Counter::HostToArray, bytes.size());
    return placed;
  }

  /// Stores a typed data line bound to `keyword` on its chain (table columns).
  std::pair<DpuId, LineId> store_line(const std::string& keyword, Granularity g, std::span<const Value> values) {
    if (values.empty()) fail(Errc::OutOfBounds, "empty data line");
    for (auto v : values) require_representable(v, g);
    auto placed = place_on_chain(keyword, [&](Dpu& d) {
      auto l = d.alloc_data_line(g, values.size(), keyword, LineKind::Data);
      d.write_items(l.id, 0, values);
      return l.id;
    });
    record_counter(Counter::HostToArray, width(g) * values.size());
    return placed;
  }

  void add_column(ColumnRef c) { columns_.push_back(std::move(c)); }

  std::set<DpuId> select_dpus(const std::set<std::string>& keywords) const {
    std::set<DpuId> out;
    for (const auto& k : keywords) {
      if (const auto* c = directory_.chain(k)) out.insert(c->begin(), c->end());
    }
    return out;
  }

  /// Reads back every record stored for `keyword`, ordered by (message, sentence).
  std::vector<ValueRecord> records_for(const std::string& keyword) {
    std::vector<ValueRecord> out;
    const auto* chain = directory_.chain(keyword);
    if (!chain) return out;
    for (auto id : *chain) {
      for (const auto& [lid, l] : dpus_[id].lines()) {
        if (l.kind != LineKind::Record || l.binding != keyword) continue;
        auto bytes = dpus_[id].line_bytes(lid);
        record_counter(Counter::ArrayToHost, bytes.size());
        out.push_back(decode_record(bytes));
      }
    }
    std::sort(out.begin(), out.end(), [](const ValueRecord& a, const ValueRecord& b) {
      return std::tie(a.message_id, a.sentence_index) < std::tie(b.message_id, b.sentence_index);
    });
    return out;
  }

  // -- relations -------------------------------------------------------------

  void add_relation(const std::string& a, const std::string& b, std::uint64_t delta = 1) {
    if (a.empty() || b.empty()) fail(Errc::EmptyKey, "empty keyword in relation");
    if (a == b) fail(Errc::SelfEdge, "relation of '" + a + "' with itself");
    if (delta == 0) fail(Errc::OutOfBounds, "relation delta must be at least 1");
    directory_.relations[a][b] += delta;
    directory_.relations[b][a] += delta;
  }

  /// Neighbors sorted by weight descending, then keyword ascending.
  std::vector<Neighbor> relations_of(const std::string& keyword) const {
    std::vector<Neighbor> out;
    if (auto it = directory_.relations.find(keyword); it != directory_.relations.end()) {
      out.assign(it->second.begin(), it->second.end());
    }
    std::stable_sort(out.begin(), out.end(), [](const Neighbor& x, const Neighbor& y) { return x.second > y.second; });
    return out;
  }

  // -- code ------------------------------------------------------------------

  /// Stores `code` under `method` on the method keyword's home DPU (or its chain).
  CodeId store_code(const std::string& method, const CodeLine& code) {
    const auto bytes = encode(code);
    const CodeId id = next_code_++;
    auto [home, line] = place_on_chain(method, [&](Dpu& d) { return d.store_code(id, bytes, method); });
    (void)line;
    methods_[method] = MethodRef{id, home};
    record_counter(Counter::HostToArray, bytes.size());
    return id;
  }

  std::uint64_t transfer_code(DpuId src, DpuId dst, CodeId code) {
    const auto bytes = dpus_.at(src).code_bytes(code);
    auto& d = dpus_.at(dst);
    if (d.has_code(code)) return 0;
    const std::vector<std::uint8_t> copy(bytes.begin(), bytes.end());
    d.store_code(code, copy, decode_code(copy).name);
    record_counter(Counter::InterDpu, copy.size());
    return copy.size();
  }

  /**
   * Runs `method` on every DPU holding data lines bound to one of
   * `keywords`. Missing code is shipped from the method's home DPU in one
   * delivery tick; each DPU then runs the code over its matching lines as
   * conveyor slots, all DPUs in lockstep. Window values are read back.
   */
  std::vector<InvokeResult> invoke_method(const std::string& method, const std::set<std::string>& keywords,
                                          ConveyorMode mode = ConveyorMode::Pipelined,
                                          TickOrder order = TickOrder::Forward) {
    auto mit = methods_.find(method);
    if (mit == methods_.end()) fail(Errc::NoMethod, "no method '" + method + "'");
    const MethodRef ref = mit->second;

    std::map<DpuId, std::vector<SlotOutcome>> work;
    for (auto id : select_dpus(keywords)) {
      for (const auto& [lid, l] : dpus_[id].lines()) {
        if (l.kind == LineKind::Data && l.binding && keywords.contains(*l.binding)) {
          work[id].push_back(SlotOutcome{lid, *l.binding, {}});
        }
      }
    }

    std::map<DpuId, InvokeResult> results;
    for (const auto& [id, _] : work) {
      if (!dpus_[id].has_code(ref.code)) outbox_.push_back(Transfer{ref.home, id, ref.code});
    }
    if (!outbox_.empty()) {
      global_tick(order);
      for (auto& [id, err] : delivery_errors_) {
        auto& r = results[id];
        r.dpu = id;
        r.error = err;
        r.start_clock = r.end_clock = clock_;
      }
      delivery_errors_.clear();
    }

    std::map<std::pair<DpuId, RequestId>, DpuId> pending;
    for (auto& [id, slots] : work) {
      if (results.contains(id)) continue;
      ConveyorState cs;
      cs.code_id = ref.code;
      cs.mode = mode;
      for (const auto& s : slots) cs.slots.push_back(SlotBinding{{0, s.line}});
      pending.emplace(std::pair{id, dpus_[id].enqueue(std::move(cs))}, id);
      auto& r = results[id];
      r.dpu = id;
      r.slots = slots;
      r.start_clock = clock_;
    }

    while (!pending.empty()) {
      global_tick(order);
      for (auto& tc : completions_) {
        auto it = pending.find({tc.dpu, tc.completion.id});
        if (it == pending.end()) continue;
        auto& r = results[tc.dpu];
        r.end_clock = tc.clock;
        r.ticks = tc.completion.conveyor.ticks;
        r.ops = tc.completion.conveyor.ops;
        r.error = tc.completion.error;
        const auto& values = tc.completion.conveyor.results;
        for (std::size_t s = 0; s < values.size() && s < r.slots.size(); ++s) r.slots[s].windows = values[s];
        pending.erase(it);
      }
      completions_.clear();
    }

    std::vector<InvokeResult> out;
    for (auto& [id, r] : results) {
      if (!r.error) {
        for (const auto& s : r.slots) readback_windows(id, s.windows, ref.code);
      }
      out.push_back(std::move(r));
    }
    return out;
  }

  // -- tick engine -----------------------------------------------------------

  /// Advances every non-idle DPU by one coarse tick; returns how many progressed.
  std::uint32_t global_tick(TickOrder order = TickOrder::Forward) {
    std::uint32_t progressed = 0;
    std::vector<TickCompletion> done;
    const auto visit = [&](Dpu& d) {
      if (d.idle()) return;
      ++progressed;
      if (auto c = d.step()) done.push_back(TickCompletion{clock_ + 1, d.id(), std::move(*c)});
    };
    if (order == TickOrder::Forward) {
      for (auto& d : dpus_) visit(d);
    } else {
      for (auto it = dpus_.rbegin(); it != dpus_.rend(); ++it) visit(*it);
    }
    ++clock_;
    record_counter(Counter::GlobalTicks, 1);
    // Tick boundary: buffered cross-DPU effects land in dpu-id order.
    std::sort(done.begin(), done.end(), [](const auto& a, const auto& b) { return a.dpu < b.dpu; });
    std::stable_sort(outbox_.begin(), outbox_.end(), [](const auto& a, const auto& b) { return a.dst < b.dst; });
    for (const auto& t : outbox_) {
      try {
        transfer_code(t.src, t.dst, t.code);
      } catch (const Error& e) {
        delivery_errors_.insert_or_assign(t.dst, e);
      }
    }
    outbox_.clear();
    for (auto& c : done) completions_.push_back(std::move(c));
    return progressed;
  }

  /// Completions recorded by global_tick() since the last call.
  std::vector<TickCompletion> take_completions() { return std::exchange(completions_, {}); }

  // -- persistence -----------------------------------------------------------

  void save(ByteWriter& w) const {
    w.u32(size());
    for (const auto& d : dpus_) d.save(w);
    w.u64(directory_.chains.size());
    for (const auto& [k, chain] : directory_.chains) {
      w.str(k);
      w.u32(static_cast<std::uint32_t>(chain.size()));
      for (auto id : chain) w.u32(id);
    }
    w.u64(directory_.relations.size());
    for (const auto& [k, nbrs] : directory_.relations) {
      w.str(k);
      w.u64(nbrs.size());
      for (const auto& [n, wt] : nbrs) {
        w.str(n);
        w.u64(wt);
      }
    }
    w.u64(columns_.size());
    for (const auto& c : columns_) {
      w.str(c.keyword);
      w.u32(c.dpu);
      w.u64(c.line);
    }
    w.u64(methods_.size());
    for (const auto& [m, ref] : methods_) {
      w.str(m);
      w.u64(ref.code);
      w.u32(ref.home);
    }
    detail::save_counters(w, counters_);
    w.u64(clock_);
    w.u64(next_code_);
  }

  static DpuArray load(ByteReader& r) {
    DpuArray a;
    const auto n = r.u32();
    if (n == 0) fail(Errc::Io, "snapshot has an empty array");
    for (std::uint32_t i = 0; i < n; ++i) a.dpus_.push_back(Dpu::load(r));
    const auto nchains = r.u64();
    for (std::uint64_t i = 0; i < nchains; ++i) {
      auto k = r.str();
      std::vector<DpuId> chain(r.u32());
      for (auto& id : chain) {
        id = r.u32();
        if (id >= n) fail(Errc::Io, "chain entry outside array");
      }
      a.directory_.chains.emplace(std::move(k), std::move(chain));
    }
    const auto nrel = r.u64();
    for (std::uint64_t i = 0; i < nrel; ++i) {
      auto k = r.str();
      auto& nbrs = a.directory_.relations[k];
      const auto m = r.u64();
      for (std::uint64_t j = 0; j < m; ++j) {
        auto other = r.str();
        nbrs[other] = r.u64();
      }
    }
    const auto ncols = r.u64();
    for (std::uint64_t i = 0; i < ncols; ++i) {
      ColumnRef c;
      c.keyword = r.str();
      c.dpu = r.u32();
      c.line = r.u64();
      a.columns_.push_back(std::move(c));
    }
    const auto nmethods = r.u64();
    for (std::uint64_t i = 0; i < nmethods; ++i) {
      auto m = r.str();
      MethodRef ref;
      ref.code = r.u64();
      ref.home = r.u32();
      a.methods_.emplace(std::move(m), ref);
    }
    a.counters_ = detail::load_counters(r);
    a.clock_ = r.u64();
    a.next_code_ = r.u64();
    return a;
  }

 private:
  struct Transfer {
    DpuId src;
    DpuId dst;
    CodeId code;
  };

  void record_counter(Counter c, std::uint64_t n) { record(counters_, c, n); }

  void readback_windows(DpuId id, const SlotResult& windows, CodeId code) {
    // Every window is read back at its allocated width.
    const auto widths = window_widths(dpus_[id].load_code(code));
    for (const auto& [idx, _] : windows) {
      auto it = widths.find(idx);
      record_counter(Counter::ArrayToHost, it == widths.end() ? 0 : width(it->second));
    }
  }

  static std::map<std::uint32_t, Granularity> window_widths(const CodeLine& code) {
    std::map<std::uint32_t, Granularity> widths;
    for (const auto& st : code.stages) {
      for (const Operand* op : {&st.command.a, &st.command.b, &st.command.dst}) {
        if (const auto* w = std::get_if<WindowRef>(op)) {
          auto& g = widths.try_emplace(w->index, st.command.granularity).first->second;
          if (width(st.command.granularity) > width(g)) g = st.command.granularity;
        }
      }
    }
    return widths;
  }

  /**
   * Tries the keyword's chain in order, then extends it through ring
   * successors until `attempt` succeeds. The chain is left unchanged when
   * the whole ring is full.
   */
  std::pair<DpuId, LineId> place_on_chain(const std::string& keyword, const std::function<LineId(Dpu&)>& attempt) {
    const DpuId home = place_keyword(keyword, size());
    auto existing = directory_.chains.find(keyword);
    std::vector<DpuId> chain = existing == directory_.chains.end() ? std::vector<DpuId>{home} : existing->second;
    for (std::size_t i = 0;; ++i) {
      if (i == chain.size()) {
        if (chain.size() == size()) fail(Errc::ArrayFull, "no DPU has space for '" + keyword + "'");
        chain.push_back((chain.back() + 1) % size());
      }
      try {
        const LineId line = attempt(dpus_[chain[i]]);
        directory_.chains[keyword] = chain;
        return {chain[i], line};
      } catch (const Error& e) {
        if (e.code() != Errc::NoSpace) throw;
      }
    }
  }

  std::vector<Dpu> dpus_;
  Directory directory_;
  std::vector<ColumnRef> columns_;
  std::map<std::string, MethodRef> methods_;
  CounterBlock counters_;
  std::uint64_t clock_ = 0;
  CodeId next_code_ = 1;
  std::vector<Transfer> outbox_;
  std::map<DpuId, Error> delivery_errors_;
  std::vector<TickCompletion> completions_;
};

}  // namespace pinvsm
