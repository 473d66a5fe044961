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

#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pinvsm/array.hpp"
#include "pinvsm/error.hpp"
#include "pinvsm/record.hpp"
#include "pinvsm/table.hpp"

namespace pinvsm {

struct Token {
  std::string text;
  std::size_t offset = 0;
  bool operator==(const Token&) const = default;
};

struct Message {
  std::uint64_t id = 0;
  std::string text;
};

struct KeyValuePair {
  std::string keyword;
  ValueRecord value;
  bool operator==(const KeyValuePair&) const = default;
};

using StopwordList = std::set<std::string>;

inline bool valid_utf8(std::string_view s) noexcept {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t n = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      n = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      n = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      n = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (s.size() - i <= n) return false;
    for (std::size_t k = 1; k <= n; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[n] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += n + 1;
  }
  return true;
}

inline bool is_token_byte(char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

/// Maximal runs of ASCII letters and digits, lowercased, with byte offsets
/// into `text`. Every other byte separates tokens.
inline std::vector<Token> tokenize(std::string_view text) {
  if (!valid_utf8(text)) fail(Errc::Utf8, "invalid UTF-8 input");
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_token_byte(text[i])) {
      ++i;
      continue;
    }
    Token t{{}, i};
    while (i < text.size() && is_token_byte(text[i])) {
      char c = text[i++];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      t.text.push_back(c);
    }
    out.push_back(std::move(t));
  }
  return out;
}

/// Sentences split on '.', '!' and '?', trimmed; segments without tokens are dropped.
inline std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] != '.' && text[i] != '!' && text[i] != '?') continue;
    auto seg = text.substr(start, i - start);
    const auto b = seg.find_first_not_of(" \t\r\n");
    if (b != std::string_view::npos) {
      seg = seg.substr(b, seg.find_last_not_of(" \t\r\n") - b + 1);
      bool has_token = false;
      for (char c : seg) has_token = has_token || is_token_byte(c);
      if (has_token) out.emplace_back(seg);
    }
    start = i + 1;
  }
  return out;
}

/**
 * Decomposes a message into keyword-value pairs: one pair per distinct
 * non-stopword token of each sentence, in order of first occurrence. The
 * value records the sentence and the token ordinals where it occurs.
 */
inline std::vector<KeyValuePair> extract_pairs(const Message& message, const StopwordList& stopwords) {
  if (!valid_utf8(message.text)) fail(Errc::Utf8, "message " + std::to_string(message.id) + " is not valid UTF-8");
  std::vector<KeyValuePair> out;
  const auto sentences = split_sentences(message.text);
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto tokens = tokenize(sentences[s]);
    std::map<std::string, std::size_t> slot;
    for (std::size_t p = 0; p < tokens.size(); ++p) {
      const auto& tok = tokens[p].text;
      if (stopwords.contains(tok)) continue;
      auto [it, fresh] = slot.try_emplace(tok, out.size());
      if (fresh) {
        out.push_back(KeyValuePair{tok, ValueRecord{message.id, static_cast<std::uint32_t>(s), sentences[s], {}}});
      }
      out[it->second].value.positions.push_back(static_cast<std::uint32_t>(p));
    }
  }
  return out;
}

struct IngestStats {
  std::uint64_t pairs = 0;
  std::uint64_t relations = 0;
  std::uint64_t bytes_in = 0;
  bool operator==(const IngestStats&) const = default;
};

/// Stores every pair on its keyword's chain and links co-occurring keywords.
inline IngestStats ingest_message(DpuArray& array, const Message& message, const StopwordList& stopwords) {
  IngestStats stats;
  const auto pairs = extract_pairs(message, stopwords);
  const auto before = array.counters().host_to_array_bytes;
  for (const auto& p : pairs) {
    array.store_pair(p.keyword, p.value);
    ++stats.pairs;
  }
  // Pairs of one sentence are contiguous in `pairs`.
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < pairs.size() && pairs[j].value.sentence_index == pairs[i].value.sentence_index; ++j) {
      array.add_relation(pairs[i].keyword, pairs[j].keyword, 1);
      ++stats.relations;
    }
  }
  stats.bytes_in = array.counters().host_to_array_bytes - before;
  return stats;
}

/// Header cell as a keyword: its tokens joined by '_'.
inline std::string normalize_header(std::string_view header) {
  std::string out;
  for (const auto& t : tokenize(header)) out += (out.empty() ? "" : "_") + t.text;
  if (out.empty()) fail(Errc::EmptyKey, "header '" + std::string(header) + "' has no keyword");
  return out;
}

/// CSV: first row headers, unsigned decimal cells, comma separated, no quoting.
inline Table parse_csv(std::istream& in) {
  Table t;
  std::string line;
  std::size_t line_no = 0;
  const auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      auto end = s.find(',', start);
      auto cell = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
      const auto b = cell.find_first_not_of(" \t\r");
      cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, cell.find_last_not_of(" \t\r") - b + 1));
      if (end == std::string::npos) break;
      start = end + 1;
    }
    return cells;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!valid_utf8(line)) fail(Errc::Utf8, "line " + std::to_string(line_no) + ": invalid UTF-8");
    auto cells = split(line);
    if (t.headers.empty()) {
      t.headers = std::move(cells);
      continue;
    }
    std::vector<Value> row;
    for (const auto& c : cells) {
      Value v = 0;
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec == std::errc::result_out_of_range) fail(Errc::Overflow, "line " + std::to_string(line_no) + ": cell '" + c + "' too large");
      if (c.empty() || ec != std::errc() || ptr != c.data() + c.size()) {
        fail(Errc::Parse, "line " + std::to_string(line_no) + ": cell '" + c + "' is not an unsigned integer");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.headers.empty()) fail(Errc::Parse, "table has no header row");
  return t;
}

struct PlacedColumn {
  std::string keyword;
  DpuId dpu = 0;
  LineId line = 0;
  bool operator==(const PlacedColumn&) const = default;
};

/// One data line per column, placed by the normalized header keyword.
inline std::vector<PlacedColumn> ingest_table(DpuArray& array, const Table& table, Granularity g) {
  check_table(table, g);
  if (table.rows.empty()) fail(Errc::OutOfBounds, "table has no rows");
  std::vector<std::string> keys;
  for (const auto& h : table.headers) keys.push_back(normalize_header(h));
  std::vector<PlacedColumn> out;
  for (std::size_t c = 0; c < keys.size(); ++c) {
    std::vector<Value> column;
    column.reserve(table.rows.size());
    for (const auto& row : table.rows) column.push_back(row[c]);
    auto [dpu, line] = array.store_line(keys[c], g, column);
    array.add_column(ColumnRef{keys[c], dpu, line});
    out.push_back(PlacedColumn{keys[c], dpu, line});
  }
  return out;
}

}  // namespace pinvsm
