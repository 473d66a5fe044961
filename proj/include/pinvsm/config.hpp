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
#include <optional>
#include <string>
#include <string_view>

#include "pinvsm/baseline.hpp"
#include "pinvsm/bytes.hpp"
#include "pinvsm/counters.hpp"
#include "pinvsm/error.hpp"

namespace pinvsm {

struct Config {
  std::uint32_t array_size = 16;
  std::uint64_t dpu_capacity = 65536;
  Granularity granularity = Granularity::B4;
  std::optional<std::string> stopwords_path;
  EnergyWeights weights;
  BaselineConfig baseline;
  std::uint64_t seed = 0;

  bool operator==(const Config&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    fail(Errc::Config, "key '" + std::string(key) + "': '" + std::string(v) + "' is not an unsigned integer");
  }
  return out;
}

inline std::int64_t parse_i64(std::string_view key, std::string_view v) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    fail(Errc::Config, "key '" + std::string(key) + "': '" + std::string(v) + "' is not an integer");
  }
  return out;
}

}  // namespace detail

/// Accepts "3", "-1", "3/2" or a decimal such as "0.25".
inline Rational parse_rational(std::string_view key, std::string_view v) {
  if (auto slash = v.find('/'); slash != std::string_view::npos) {
    const auto den = detail::parse_i64(key, v.substr(slash + 1));
    if (den == 0) fail(Errc::Config, "key '" + std::string(key) + "': zero denominator");
    return Rational(detail::parse_i64(key, v.substr(0, slash)), den);
  }
  if (auto dot = v.find('.'); dot != std::string_view::npos) {
    const auto frac = v.substr(dot + 1);
    if (frac.size() > 15) fail(Errc::Config, "key '" + std::string(key) + "': too many decimals");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const bool negative = !v.empty() && v.front() == '-';
    const auto whole_text = v.substr(0, dot);
    const std::int64_t whole = whole_text.empty() || whole_text == "-" ? 0 : detail::parse_i64(key, whole_text);
    const std::int64_t part = frac.empty() ? 0 : static_cast<std::int64_t>(detail::parse_u64(key, frac));
    return Rational(whole, 1) + Rational(negative ? -part : part, den);
  }
  return Rational(detail::parse_i64(key, v));
}

inline void validate(const Config& c) {
  if (c.array_size < 1) fail(Errc::Config, "key 'array_size': must be at least 1");
  if (c.dpu_capacity < 256) fail(Errc::Config, "key 'dpu_capacity': must be at least 256");
  if (c.weights.any_negative()) fail(Errc::Config, "key 'weight': weights must be non-negative");
  if (c.baseline.registers < 2) fail(Errc::Config, "key 'baseline_registers': must be at least 2");
  if (c.baseline.cache_lines < 1) fail(Errc::Config, "key 'baseline_cache_lines': must be at least 1");
  if (c.baseline.ways != 0 && c.baseline.cache_lines % c.baseline.ways != 0) {
    fail(Errc::Config, "key 'baseline_ways': must divide baseline_cache_lines");
  }
}

inline void set_config_key(Config& c, std::string_view key, std::string_view value) {
  const auto narrow32 = [&](std::uint64_t v) {
    if (v > 0xFFFFFFFFu) fail(Errc::Config, "key '" + std::string(key) + "': value too large");
    return static_cast<std::uint32_t>(v);
  };
  if (key == "array_size") {
    c.array_size = narrow32(detail::parse_u64(key, value));
  } else if (key == "dpu_capacity") {
    c.dpu_capacity = detail::parse_u64(key, value);
  } else if (key == "granularity") {
    const auto g = detail::parse_u64(key, value);
    if (g != 1 && g != 2 && g != 4 && g != 8) fail(Errc::Config, "key 'granularity': must be 1, 2, 4 or 8");
    c.granularity = make_granularity(g);
  } else if (key == "stopwords") {
    c.stopwords_path = std::string(value);
  } else if (key == "seed") {
    c.seed = detail::parse_u64(key, value);
  } else if (key == "baseline_registers") {
    c.baseline.registers = narrow32(detail::parse_u64(key, value));
  } else if (key == "baseline_cache_lines") {
    c.baseline.cache_lines = narrow32(detail::parse_u64(key, value));
  } else if (key == "baseline_ways") {
    c.baseline.ways = narrow32(detail::parse_u64(key, value));
  } else if (key.starts_with("weight.")) {
    c.weights.set(key.substr(7), parse_rational(key, value));
  } else {
    fail(Errc::Config, "unknown key '" + std::string(key) + "'");
  }
}

/// "key = value" lines; '#' starts a comment.
inline Config parse_config(std::istream& in, Config base = {}) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view v = line;
    if (auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = detail::trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos) fail(Errc::Config, "line " + std::to_string(line_no) + ": expected 'key = value'");
    set_config_key(base, detail::trim(v.substr(0, eq)), detail::trim(v.substr(eq + 1)));
  }
  validate(base);
  return base;
}

}  // namespace pinvsm
