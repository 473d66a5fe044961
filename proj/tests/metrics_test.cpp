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

#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pinvsm/baseline.hpp"
#include "pinvsm/counters.hpp"

using namespace pinvsm;

namespace {

Table random_table(std::mt19937_64& rng, std::size_t rows, std::size_t cols, Granularity g) {
  Table t;
  for (std::size_t c = 0; c < cols; ++c) t.headers.push_back("c" + std::to_string(c));
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<Value> row;
    for (std::size_t c = 0; c < cols; ++c) row.push_back(rng() & max_value(g));
    t.rows.push_back(row);
  }
  return t;
}

}  // namespace

TEST(Counters, FreshBlockIsZero) {
  CounterBlock c;
  for (const auto& [_, v] : c.fields()) EXPECT_EQ(v, 0u);
  for (const auto& [_, v] : BaselineCounters{}.fields()) EXPECT_EQ(v, 0u);
}

TEST(Counters, RecordAccumulates) {
  CounterBlock c;
  record(c, Counter::InterDpu, 64);
  record(c, Counter::InterDpu, 64);
  EXPECT_EQ(c.inter_dpu_bytes, 128u);
  const CounterBlock snap = c;
  record(c, Counter::IntraDpuOps, 3);
  EXPECT_EQ(snap.intra_dpu_ops, 0u);
  EXPECT_EQ((c - snap).intra_dpu_ops, 3u);
  EXPECT_EQ((c - snap).inter_dpu_bytes, 0u);
}

TEST(Energy, ZeroCountersGiveZero) {
  EXPECT_EQ(energy(CounterBlock{}, EnergyWeights::uniform(Rational(7))), Rational(0));
}

TEST(Energy, WeightedSum) {
  CounterBlock c{10, 0, 5, 3, 2};
  EXPECT_EQ(energy(c, EnergyWeights{}), Rational(20));
  EnergyWeights w;
  w.set("inter_dpu_bytes", Rational(1, 2));
  EXPECT_EQ(energy(c, w), Rational(35, 2));
}

TEST(Energy, LinearityProperty) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto pick = [&] { return CounterBlock{rng() % 1000, rng() % 1000, rng() % 1000, rng() % 1000, rng() % 1000}; };
    const auto a = pick(), b = pick();
    EnergyWeights w;
    for (auto n : kCounterNames) w.set(n, Rational(static_cast<std::int64_t>(rng() % 9), 1 + static_cast<std::int64_t>(rng() % 4)));
    CounterBlock sum{a.host_to_array_bytes + b.host_to_array_bytes, a.array_to_host_bytes + b.array_to_host_bytes,
                     a.inter_dpu_bytes + b.inter_dpu_bytes, a.intra_dpu_ops + b.intra_dpu_ops,
                     a.global_ticks + b.global_ticks};
    ASSERT_EQ(energy(sum, w), energy(a, w) + energy(b, w));
  }
}

TEST(Energy, UnknownWeightName) {
  EnergyWeights w;
  EXPECT_THROW(w.set("bogus", Rational(1)), Error);
}

TEST(Baseline, SingleCell) {
  BaselineMachine m;
  const auto [sums, c] = baseline_column_sum(m, Table{{"a"}, {{7}}}, Granularity::B4);
  EXPECT_EQ(sums, std::vector<Value>{7});
  EXPECT_EQ(c, (BaselineCounters{64, 64, 4, 1}));
}

TEST(Baseline, HandTracedThreeByTwo) {
  BaselineMachine m;
  const auto [sums, c] = baseline_column_sum(m, Table{{"x", "y"}, {{1, 2}, {3, 4}, {5, 6}}}, Granularity::B4);
  EXPECT_EQ(sums, (std::vector<Value>{9, 12}));
  EXPECT_EQ(c, (BaselineCounters{64, 64, 24, 6}));
}

TEST(Baseline, WrapsAtGranularity) {
  BaselineMachine m;
  const auto [sums, _] = baseline_column_sum(m, Table{{"a"}, {{200}, {100}}}, Granularity::B1);
  EXPECT_EQ(sums, std::vector<Value>{44});
}

TEST(Baseline, MatchesBruteForceOnRandomTables) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 150; ++i) {
    const auto g = make_granularity(1u << (rng() % 4));
    const std::size_t rows = 1 + rng() % 80, cols = 1 + rng() % 12;
    const std::uint32_t ways_opts[] = {0, 1, 2, 4};
    const BaselineConfig cfg{2 + static_cast<std::uint32_t>(rng() % 8), 8, ways_opts[rng() % 4]};
    const auto t = random_table(rng, rows, cols, g);
    BaselineMachine m(cfg);
    const auto [sums, c] = baseline_column_sum(m, t, g);
    ASSERT_EQ(sums, oracle::column_sums(t.rows, cols, width(g)));
    const auto tr = oracle::baseline_trace(rows, cols, width(g), cfg.cache_lines, cfg.ways);
    ASSERT_EQ(c, (BaselineCounters{tr.storage_to_dram, tr.dram_to_cache, tr.cache_to_reg, tr.alu}));
  }
}

TEST(Baseline, TrafficLowerBounds) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto g = make_granularity(1u << (rng() % 4));
    const std::size_t rows = 1 + rng() % 200, cols = 1 + rng() % 10;
    const auto t = random_table(rng, rows, cols, g);
    BaselineMachine m(BaselineConfig{4, 4, 0});
    const auto [_, c] = baseline_column_sum(m, t, g);
    const std::uint64_t bytes = rows * cols * width(g);
    const std::uint64_t distinct = (bytes + 63) / 64;
    ASSERT_EQ(c.storage_to_dram_bytes, 64 * distinct);
    ASSERT_GE(c.dram_to_cache_bytes, 64 * distinct);
    if (bytes > 4 * 64) {
      ASSERT_GE(c.dram_to_cache_bytes, bytes);
    }
    ASSERT_EQ(c.alu_ops, rows * cols);
  }
}

TEST(Baseline, ColumnMajorScanThrashesSmallCache) {
  Table t;
  t.headers = {"a", "b", "c", "d", "e", "f", "g", "h"};
  t.rows.assign(1024, std::vector<Value>(8, 1));
  BaselineMachine m(BaselineConfig{16, 64, 0});
  const auto [sums, c] = baseline_column_sum(m, t, Granularity::B4);
  EXPECT_EQ(sums, std::vector<Value>(8, 1024));
  EXPECT_GE(c.dram_to_cache_bytes, 1024u * 8 * 4);
}

TEST(Baseline, ConfigErrors) {
  EXPECT_THROW(BaselineMachine(BaselineConfig{1, 64, 0}), Error);
  EXPECT_THROW(BaselineMachine(BaselineConfig{16, 0, 0}), Error);
  EXPECT_THROW(BaselineMachine(BaselineConfig{16, 6, 4}), Error);
}

TEST(LruCache, EvictsLeastRecentlyUsed) {
  LruCache c(2, 0);
  EXPECT_FALSE(c.access(1));
  EXPECT_FALSE(c.access(2));
  EXPECT_TRUE(c.access(1));
  EXPECT_FALSE(c.access(3));  // evicts 2
  EXPECT_TRUE(c.access(1));
  EXPECT_FALSE(c.access(2));
}

TEST(LruCache, SetsAreIndependent) {
  LruCache c(4, 2);  // two sets
  EXPECT_FALSE(c.access(0));
  EXPECT_FALSE(c.access(2));
  EXPECT_FALSE(c.access(1));
  EXPECT_FALSE(c.access(4));  // set 0 evicts block 0
  EXPECT_TRUE(c.access(1));
  EXPECT_FALSE(c.access(0));
}

TEST(Compare, IdenticalEnergyGivesOne) {
  const auto r = compare_report(CounterBlock{64, 0, 0, 0, 0}, BaselineCounters{64, 0, 0, 0}, EnergyWeights{});
  ASSERT_TRUE(r.ratio);
  EXPECT_DOUBLE_EQ(*r.ratio, 1.0);
}

TEST(Compare, BaselineHeavierGivesRatioAboveOne) {
  const auto r = compare_report(CounterBlock{24, 8, 0, 8, 4}, BaselineCounters{64, 64, 24, 6}, EnergyWeights{});
  EXPECT_EQ(r.energy_array, Rational(44));
  EXPECT_EQ(r.energy_baseline, Rational(158));
  EXPECT_GT(*r.ratio, 1.0);
}

TEST(Compare, ZeroArrayEnergyIsUndefined) {
  const auto r = compare_report(CounterBlock{5, 5, 5, 5, 5}, BaselineCounters{1, 1, 1, 1},
                                EnergyWeights::uniform(Rational(0)));
  EXPECT_FALSE(r.ratio);
  EXPECT_NE(to_json(r).find("\"ratio\": \"undefined\""), std::string::npos);
}

TEST(Compare, NegativeWeightRejected) {
  EnergyWeights w;
  w.set("alu_ops", Rational(-1));
  try {
    compare_report(CounterBlock{}, BaselineCounters{}, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Weights);
  }
}

TEST(Json, KeyOrderIsFixed) {
  const auto r = compare_report(CounterBlock{1, 2, 3, 4, 5}, BaselineCounters{6, 7, 8, 9}, EnergyWeights{});
  const auto s = to_json(r);
  EXPECT_EQ(s, to_json(r));
  std::size_t last = 0;
  for (auto key : {"\"array\"", "\"host_to_array_bytes\"", "\"global_ticks\"", "\"baseline\"", "\"storage_to_dram_bytes\"",
                   "\"alu_ops\"", "\"energy_array\"", "\"energy_baseline\"", "\"ratio\""}) {
    const auto at = s.find(key);
    ASSERT_NE(at, std::string::npos) << key;
    EXPECT_GT(at, last) << key;
    last = at;
  }
  EXPECT_NE(s.find("\"energy_array\": 15"), std::string::npos);
  EXPECT_NE(s.find("\"energy_baseline\": 30"), std::string::npos);
}

TEST(Json, CounterBlockDump) {
  EXPECT_EQ(to_json(CounterBlock{1, 0, 0, 0, 2}),
            "{\n  \"host_to_array_bytes\": 1,\n  \"array_to_host_bytes\": 0,\n  \"inter_dpu_bytes\": 0,\n"
            "  \"intra_dpu_ops\": 0,\n  \"global_ticks\": 2\n}\n");
}
