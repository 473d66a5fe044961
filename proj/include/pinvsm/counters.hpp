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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <boost/rational.hpp>
#include <json.hpp>

#include "pinvsm/error.hpp"

namespace pinvsm {

using Rational = boost::rational<std::int64_t>;

/// Movement and work counters of the DPU array (or of one DPU).
struct CounterBlock {
  std::uint64_t host_to_array_bytes = 0;
  std::uint64_t array_to_host_bytes = 0;
  std::uint64_t inter_dpu_bytes = 0;
  std::uint64_t intra_dpu_ops = 0;
  std::uint64_t global_ticks = 0;

  std::array<std::pair<std::string_view, std::uint64_t>, 5> fields() const {
    return {{{"host_to_array_bytes", host_to_array_bytes},
             {"array_to_host_bytes", array_to_host_bytes},
             {"inter_dpu_bytes", inter_dpu_bytes},
             {"intra_dpu_ops", intra_dpu_ops},
             {"global_ticks", global_ticks}}};
  }

  CounterBlock operator-(const CounterBlock& o) const {
    return {host_to_array_bytes - o.host_to_array_bytes, array_to_host_bytes - o.array_to_host_bytes,
            inter_dpu_bytes - o.inter_dpu_bytes, intra_dpu_ops - o.intra_dpu_ops, global_ticks - o.global_ticks};
  }

  bool operator==(const CounterBlock&) const = default;
};

/// Hierarchy traffic of the CPU-centric baseline machine.
struct BaselineCounters {
  std::uint64_t storage_to_dram_bytes = 0;
  std::uint64_t dram_to_cache_bytes = 0;
  std::uint64_t cache_to_reg_bytes = 0;
  std::uint64_t alu_ops = 0;

  std::array<std::pair<std::string_view, std::uint64_t>, 4> fields() const {
    return {{{"storage_to_dram_bytes", storage_to_dram_bytes},
             {"dram_to_cache_bytes", dram_to_cache_bytes},
             {"cache_to_reg_bytes", cache_to_reg_bytes},
             {"alu_ops", alu_ops}}};
  }

  bool operator==(const BaselineCounters&) const = default;
};

enum class Counter { HostToArray, ArrayToHost, InterDpu, IntraDpuOps, GlobalTicks };

inline void record(CounterBlock& c, Counter which, std::uint64_t magnitude) noexcept {
  switch (which) {
    case Counter::HostToArray: c.host_to_array_bytes += magnitude; break;
    case Counter::ArrayToHost: c.array_to_host_bytes += magnitude; break;
    case Counter::InterDpu: c.inter_dpu_bytes += magnitude; break;
    case Counter::IntraDpuOps: c.intra_dpu_ops += magnitude; break;
    case Counter::GlobalTicks: c.global_ticks += magnitude; break;
  }
}

inline constexpr std::array<std::string_view, 9> kCounterNames = {
    "host_to_array_bytes",   "array_to_host_bytes", "inter_dpu_bytes",    "intra_dpu_ops", "global_ticks",
    "storage_to_dram_bytes", "dram_to_cache_bytes", "cache_to_reg_bytes", "alu_ops"};

/// Per-counter energy weight (per byte or per op). Missing names weigh 1.
class EnergyWeights {
 public:
  EnergyWeights() = default;

  static EnergyWeights uniform(Rational w) {
    EnergyWeights out;
    for (auto n : kCounterNames) out.weights_[std::string(n)] = w;
    return out;
  }

  void set(std::string_view name, Rational w) {
    bool known = false;
    for (auto n : kCounterNames) known = known || n == name;
    if (!known) fail(Errc::Config, "unknown counter '" + std::string(name) + "'");
    weights_[std::string(name)] = w;
  }

  Rational get(std::string_view name) const {
    auto it = weights_.find(std::string(name));
    return it == weights_.end() ? Rational(1) : it->second;
  }

  bool any_negative() const {
    for (const auto& [_, w] : weights_)
      if (w.numerator() < 0) return true;
    return false;
  }

  const std::map<std::string, Rational>& explicit_weights() const noexcept { return weights_; }

  bool operator==(const EnergyWeights&) const = default;

 private:
  std::map<std::string, Rational> weights_;
};

template <typename Counters>
Rational energy(const Counters& counters, const EnergyWeights& weights) {
  Rational total(0);
  for (const auto& [name, value] : counters.fields()) total += Rational(static_cast<std::int64_t>(value)) * weights.get(name);
  return total;
}

struct ComparisonReport {
  CounterBlock array;
  BaselineCounters baseline;
  Rational energy_array;
  Rational energy_baseline;
  std::optional<double> ratio;  // baseline / array; empty when the array energy is zero
};

inline ComparisonReport compare_report(const CounterBlock& array, const BaselineCounters& baseline,
                                       const EnergyWeights& weights) {
  if (weights.any_negative()) fail(Errc::Weights, "negative energy weight");
  ComparisonReport r{array, baseline, energy(array, weights), energy(baseline, weights), std::nullopt};
  if (r.energy_array.numerator() != 0) r.ratio = boost::rational_cast<double>(r.energy_baseline / r.energy_array);
  return r;
}

namespace detail {

inline nlohmann::ordered_json rational_json(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return boost::rational_cast<double>(r);
}

template <typename Counters>
nlohmann::ordered_json counters_json(const Counters& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [name, value] : c.fields()) j[std::string(name)] = value;
  return j;
}

}  // namespace detail

inline std::string to_json(const CounterBlock& c) { return detail::counters_json(c).dump(2) + "\n"; }

/// Keys are emitted in a fixed order so reports are byte-stable.
inline std::string to_json(const ComparisonReport& r) {
  nlohmann::ordered_json j;
  j["array"] = detail::counters_json(r.array);
  j["baseline"] = detail::counters_json(r.baseline);
  j["energy_array"] = detail::rational_json(r.energy_array);
  j["energy_baseline"] = detail::rational_json(r.energy_baseline);
  if (r.ratio) {
    j["ratio"] = *r.ratio;
  } else {
    j["ratio"] = "undefined";
  }
  return j.dump(2) + "\n";
}

}  // namespace pinvsm
