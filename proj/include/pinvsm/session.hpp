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
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "pinvsm/array.hpp"
#include "pinvsm/baseline.hpp"
#include "pinvsm/config.hpp"
#include "pinvsm/counters.hpp"
#include "pinvsm/dpu.hpp"
#include "pinvsm/ingest.hpp"
#include "pinvsm/isa.hpp"
#include "pinvsm/snapshot.hpp"

// Batch commands behind the pinvsm tool. Each takes an in-memory session;
// the tool loads it from and saves it to the session directory.
namespace pinvsm::cli {

inline constexpr const char* kStateFile = "state.pinvsm";
inline constexpr const char* kColsumMethod = "colsum";

inline std::filesystem::path state_path(const std::filesystem::path& session_dir) { return session_dir / kStateFile; }

inline StopwordList read_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Io, "cannot open stopword file '" + path.string() + "'");
  StopwordList out;
  std::string line;
  while (std::getline(in, line)) {
    for (const auto& t : tokenize(line)) out.insert(t.text);
  }
  return out;
}

inline Session make_session(const Config& config) {
  validate(config);
  Session s;
  s.config = config;
  if (config.stopwords_path) s.stopwords = read_stopwords(*config.stopwords_path);
  s.array = DpuArray(config.array_size, config.dpu_capacity);
  return s;
}

/// Creates a fresh session directory; refuses to overwrite unless forced.
inline Session cmd_init(const std::filesystem::path& dir, const Config& config, bool force, std::ostream& out) {
  auto s = make_session(config);
  std::error_code ec;
  if (std::filesystem::exists(state_path(dir), ec) && !force) {
    fail(Errc::Io, "session '" + dir.string() + "' already exists (use --force)");
  }
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(Errc::Io, "cannot create '" + dir.string() + "': " + ec.message());
  save_session_file(s, state_path(dir));
  out << "initialized array_size=" << config.array_size << " dpu_capacity=" << config.dpu_capacity << "\n";
  return s;
}

inline void print_stats(const IngestStats& st, std::ostream& out) {
  out << "pairs=" << st.pairs << " relations=" << st.relations << " bytes_in=" << st.bytes_in << "\n";
}

/// Each input line is one message; message ids continue across calls.
inline IngestStats cmd_ingest_text(Session& s, std::istream& in, std::ostream& out, const std::string& source = "<text>") {
  IngestStats total;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      const auto st = ingest_message(s.array, Message{s.next_message, line}, s.stopwords);
      total.pairs += st.pairs;
      total.relations += st.relations;
      total.bytes_in += st.bytes_in;
    } catch (const Error& e) {
      throw Error(e.code(), source + ":" + std::to_string(line_no) + ": " + e.message());
    }
    ++s.next_message;
  }
  print_stats(total, out);
  return total;
}

inline std::vector<PlacedColumn> cmd_ingest_table(Session& s, std::istream& in, std::optional<Granularity> gran,
                                                  std::ostream& out, const std::string& source = "<table>") {
  std::vector<PlacedColumn> placed;
  const auto before = s.array.counters().host_to_array_bytes;
  try {
    placed = ingest_table(s.array, parse_csv(in), gran.value_or(s.config.granularity));
  } catch (const Error& e) {
    throw Error(e.code(), source + ": " + e.message());
  }
  out << "columns=" << placed.size() << " bytes_in=" << s.array.counters().host_to_array_bytes - before << "\n";
  for (const auto& c : placed) out << "column " << c.keyword << " dpu=" << c.dpu << " line=" << c.line << "\n";
  return placed;
}

inline std::string normalize_query(std::string_view k) {
  std::string out(k);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

/// Records per keyword in (message, sentence) order, then the top related keywords.
inline void cmd_query(Session& s, const std::vector<std::string>& keywords, std::ostream& out) {
  std::set<std::string> keys;
  for (const auto& k : keywords) keys.insert(normalize_query(k));
  for (const auto& k : keys) {
    const auto records = s.array.records_for(k);
    out << "[" << k << "] records=" << records.size() << "\n";
    for (const auto& r : records) out << "  msg=" << r.message_id << " sentence=" << r.sentence_index << ": " << r.sentence << "\n";
    const auto related = s.array.relations_of(k);
    out << "  related:";
    for (std::size_t i = 0; i < related.size() && i < 5; ++i) out << " " << related[i].first << "=" << related[i].second;
    out << "\n";
  }
}

inline CodeLine colsum_code(Granularity g) {
  const auto gs = std::to_string(width(g));
  return assemble("init: SET_IMM." + gs + " _, 0 -> W0\nsum: ADD." + gs + " W0, L0[ROW] -> W0 @rows\n", kColsumMethod);
}

inline void print_delta(const CounterBlock& d, std::ostream& out) {
  out << "delta";
  for (const auto& [name, v] : d.fields()) out << " " << name << "=" << v;
  out << "\n";
}

struct ColsumResult {
  std::vector<std::pair<std::string, Value>> sums;  // in column order
  CounterBlock compute_delta;
};

/// Sums every ingested column where it lives; only window values come back.
inline ColsumResult cmd_run_colsum(Session& s, std::ostream& out) {
  auto& a = s.array;
  if (a.columns().empty()) fail(Errc::NoLine, "colsum: no table ingested");
  const auto& first = a.columns().front();
  const auto code = colsum_code(a.dpu(first.dpu).line(first.line).granularity);
  const auto existing = a.methods().find(kColsumMethod);
  if (existing == a.methods().end() ||
      decode_code(a.dpu(existing->second.home).code_bytes(existing->second.code)) != code) {
    a.store_code(kColsumMethod, code);
  }
  std::set<std::string> keys;
  for (const auto& c : a.columns()) keys.insert(c.keyword);

  const auto before = a.counters();
  const auto results = a.invoke_method(kColsumMethod, keys);
  ColsumResult r;
  r.compute_delta = a.counters() - before;

  std::map<std::pair<DpuId, LineId>, Value> by_line;
  std::optional<Error> first_error;
  for (const auto& ir : results) {
    if (ir.error && !first_error) first_error = Error(ir.error->code(), "colsum on DPU " + std::to_string(ir.dpu) + ": " + ir.error->message());
    for (const auto& slot : ir.slots) {
      if (auto it = slot.windows.find(0); it != slot.windows.end()) by_line[{ir.dpu, slot.line}] = it->second;
    }
  }
  bool sep = false;
  for (const auto& c : a.columns()) {
    auto it = by_line.find({c.dpu, c.line});
    if (it == by_line.end()) continue;
    r.sums.emplace_back(c.keyword, it->second);
    out << (sep ? " " : "") << c.keyword << "=" << it->second;
    sep = true;
  }
  out << "\n";
  out << "compute_host_bytes=" << r.compute_delta.host_to_array_bytes << "\n";
  print_delta(r.compute_delta, out);
  if (first_error) throw *first_error;
  return r;
}

/// 64-bit LCG (Knuth MMIX constants) driving generated workload data.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_ >> 33;
  }

 private:
  std::uint64_t state_;
};

/// Stage 0 clears W0 and W1; later stages alternate ADD into W0 and MAX into W1 over the rows of L0.
inline CodeLine pipeline_code(std::uint32_t stages, Granularity g) {
  CodeLine code;
  code.name = "pipeline";
  for (std::uint32_t s = 0; s < stages; ++s) {
    Stage st;
    st.label = "s" + std::to_string(s);
    st.command.granularity = g;
    if (s == 0) {
      st.command = Command{Opcode::SetImm, NoOperand{}, Imm{0}, WindowRef{0}, g};
    } else if (s % 2 == 1) {
      st.command = Command{Opcode::Add, WindowRef{0}, LineElem{0, std::nullopt}, WindowRef{0}, g};
      st.over_rows = true;
    } else {
      st.command = Command{Opcode::Max, WindowRef{1}, LineElem{0, std::nullopt}, WindowRef{1}, g};
      st.over_rows = true;
    }
    code.stages.push_back(std::move(st));
  }
  return code;
}

struct PipelineOptions {
  std::uint32_t stages = 3;
  std::uint32_t lines = 4;
  std::uint64_t length = 16;
};

struct PipelineResult {
  ConveyorOutcome pipelined;
  ConveyorOutcome sequential;
  bool results_equal = false;
};

/// Runs a generated conveyor in both modes on a scratch DPU; the session is untouched.
inline PipelineResult cmd_run_pipeline(const Session& s, const PipelineOptions& opt, std::ostream& out) {
  if (opt.stages == 0 || opt.lines == 0 || opt.length == 0) fail(Errc::Usage, "pipeline needs --stages, --lines and --len >= 1");
  const auto g = s.config.granularity;
  Dpu dpu(0, s.config.dpu_capacity);
  Lcg rng(s.config.seed);
  std::vector<SlotBinding> slots;
  for (std::uint32_t d = 0; d < opt.lines; ++d) {
    const auto line = dpu.alloc_data_line(g, opt.length);
    std::vector<Value> values(opt.length);
    for (auto& v : values) v = rng.next() & max_value(g);
    dpu.write_items(line.id, 0, values);
    slots.push_back(SlotBinding{{0, line.id}});
  }
  const auto code = pipeline_code(opt.stages, g);
  PipelineResult r;
  r.pipelined = run_conveyor(dpu, code, slots, ConveyorMode::Pipelined);
  if (r.pipelined.error) throw *r.pipelined.error;
  r.sequential = run_conveyor(dpu, code, slots, ConveyorMode::Sequential);
  if (r.sequential.error) throw *r.sequential.error;
  r.results_equal = r.pipelined.results == r.sequential.results;
  out << "pipelined_ticks=" << r.pipelined.ticks << " sequential_ticks=" << r.sequential.ticks
      << " results_equal=" << (r.results_equal ? "true" : "false") << "\n";
  out << "pipelined_ops=" << r.pipelined.ops << " sequential_ops=" << r.sequential.ops << "\n";
  return r;
}

/// Rebuilds the ingested table from its column lines without charging movement.
inline std::pair<Table, Granularity> stored_table(const Session& s) {
  const auto& cols = s.array.columns();
  if (cols.empty()) fail(Errc::NoLine, "no table ingested");
  Table t;
  const auto& first = s.array.dpu(cols.front().dpu).line(cols.front().line);
  const Granularity g = first.granularity;
  t.rows.assign(first.count, {});
  for (const auto& c : cols) {
    const auto& l = s.array.dpu(c.dpu).line(c.line);
    if (l.granularity != g) fail(Errc::BadGranularity, "stored columns mix granularities");
    if (l.count != first.count) fail(Errc::Ragged, "stored columns differ in length");
    const auto values = s.array.dpu(c.dpu).read_items(c.line, 0, l.count);
    t.headers.push_back(c.keyword);
    for (std::size_t r = 0; r < values.size(); ++r) t.rows[r].push_back(values[r]);
  }
  return {t, g};
}

inline void cmd_report(const Session& s, bool compare, std::ostream& out) {
  if (!compare) {
    out << to_json(s.array.counters());
    return;
  }
  const auto [table, g] = stored_table(s);
  BaselineMachine machine(s.config.baseline);
  const auto [sums, baseline] = baseline_column_sum(machine, table, g);
  (void)sums;
  out << to_json(compare_report(s.array.counters(), baseline, s.config.weights));
}

}  // namespace pinvsm::cli
