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
#include <vector>

#include <gtest/gtest.h>

#include "pinvsm/dpu.hpp"
#include "pinvsm/nvm.hpp"

using namespace pinvsm;

namespace {

template <typename F>
Errc error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::Io;
}

CodeLine code_of(const char* src) { return assemble(src, "t"); }

}  // namespace

TEST(NvmSpace, FirstFitOnEmptySpace) {
  Dpu d(0, 1024);
  EXPECT_EQ(d.alloc(64), 0u);
  EXPECT_EQ(d.alloc(32), 64u);
}

TEST(NvmSpace, FullSpaceRejectsAllocation) {
  Dpu d(0, 128);
  d.alloc(128);
  EXPECT_EQ(error_of([&] { d.alloc(1); }), Errc::NoSpace);
}

TEST(NvmSpace, FreedGapIsReusedFirstFit) {
  NvmSpace s(256);
  auto a = s.alloc(64, 1);
  s.alloc(64, 2);
  s.free(a);
  EXPECT_EQ(s.alloc(32, 3), 0u);
  EXPECT_EQ(s.alloc(32, 4), 32u);
  EXPECT_EQ(s.alloc(64, 5), 128u);
}

TEST(NvmSpace, AllocationIsZeroFilled) {
  NvmSpace s(64);
  auto a = s.alloc(8, 1);
  s.store(a, Granularity::B8, ~Value{0});
  s.free(a);
  auto b = s.alloc(8, 2);
  EXPECT_EQ(s.load(b, Granularity::B8), 0u);
}

// Random alloc/free sequences never produce overlapping or out-of-range allocations.
TEST(NvmSpace, AllocationSoundnessProperty) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    NvmSpace s(512);
    std::vector<Offset> live;
    for (int op = 0; op < 100; ++op) {
      if (!live.empty() && rng() % 3 == 0) {
        auto i = rng() % live.size();
        s.free(live[i]);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        try {
          live.push_back(s.alloc(1 + rng() % 96, op));
        } catch (const Error& e) {
          ASSERT_EQ(e.code(), Errc::NoSpace);
        }
      }
      Offset end = 0;
      for (const auto& a : s.allocations()) {
        ASSERT_GE(a.offset, end);
        ASSERT_LE(a.offset + a.length, s.capacity());
        end = a.offset + a.length;
      }
    }
  }
}

TEST(DataLine, AllocZeroFilled) {
  Dpu d(0, 1024);
  auto l = d.alloc_data_line(4, 16);
  EXPECT_EQ(l.offset, 0u);
  EXPECT_EQ(l.byte_length(), 64u);
  EXPECT_EQ(d.read_items(l.id, 0, 16), std::vector<Value>(16, 0));
}

TEST(DataLine, BadGranularity) {
  Dpu d(0, 1024);
  EXPECT_EQ(error_of([&] { d.alloc_data_line(3, 4); }), Errc::BadGranularity);
}

TEST(DataLine, TooLargeForSpace) {
  Dpu d(0, 1024);
  EXPECT_EQ(error_of([&] { d.alloc_data_line(8, 200); }), Errc::NoSpace);
}

TEST(DataLine, WriteReadRoundTripAndErrors) {
  Dpu d(0, 1024);
  auto g1 = d.alloc_data_line(1, 16);
  const std::vector<Value> v{255};
  d.write_items(g1.id, 0, v);
  EXPECT_EQ(d.read_items(g1.id, 0, 1), v);

  const std::vector<Value> big{256};
  EXPECT_EQ(error_of([&] { d.write_items(g1.id, 0, big); }), Errc::Overflow);
  EXPECT_EQ(error_of([&] { d.read_items(g1.id, 16, 1); }), Errc::OutOfBounds);
}

TEST(DataLine, LittleEndianLayout) {
  Dpu d(0, 256);
  auto l = d.alloc_data_line(4, 2);
  const std::vector<Value> v{0x01020304, 0xA0B0C0D0};
  d.write_items(l.id, 0, v);
  const auto bytes = d.nvm().bytes(l.offset, 8);
  EXPECT_EQ(std::vector<std::uint8_t>(bytes.begin(), bytes.end()),
            (std::vector<std::uint8_t>{0x04, 0x03, 0x02, 0x01, 0xD0, 0xC0, 0xB0, 0xA0}));
}

TEST(Alu, ElementaryOps) {
  Dpu d(0, 256);
  EXPECT_EQ(d.exec_elementary(Opcode::Add, 255, 1, Granularity::B1), 0u);
  EXPECT_EQ(d.exec_elementary(Opcode::CmpEq, 7, 7, Granularity::B4), 1u);
  EXPECT_EQ(d.exec_elementary(Opcode::CmpEq, 7, 8, Granularity::B4), 0u);
  // 20 * 13 = 260 = 256 + 4
  EXPECT_EQ(d.exec_elementary(Opcode::Mul, 20, 13, Granularity::B1), 4u);
  EXPECT_EQ(d.exec_elementary(Opcode::Sub, 0, 1, Granularity::B2), 0xFFFFu);
  EXPECT_EQ(d.exec_elementary(Opcode::Copy, 9, 3, Granularity::B1), 9u);
  EXPECT_EQ(d.exec_elementary(Opcode::SetImm, 9, 3, Granularity::B1), 3u);
  EXPECT_EQ(d.counters().intra_dpu_ops, 7u);
  EXPECT_EQ(error_of([&] { d.exec_elementary(Opcode::Add, 256, 1, Granularity::B1); }), Errc::Overflow);
}

TEST(Alu, ClosureProperty) {
  std::mt19937_64 rng(11);
  Dpu d(0, 256);
  for (int i = 0; i < 20000; ++i) {
    const auto g = make_granularity(1u << (rng() % 4));
    const auto op = static_cast<Opcode>(rng() % 8);
    const Value a = rng() & max_value(g);
    const Value b = rng() & max_value(g);
    ASSERT_TRUE(representable(d.exec_elementary(op, a, b, g), g));
  }
}

TEST(Queue, FifoCompletionOrder) {
  Dpu d(0, 4096);
  auto line = d.alloc_data_line(1, 4);
  std::vector<RequestId> ids;
  ids.push_back(d.enqueue(StorePairRequest{"a", {1, 2, 3}}));
  ids.push_back(d.enqueue(ReadItemsRequest{line.id, 0, 4}));
  ids.push_back(d.enqueue(StorePairRequest{"b", {4}}));
  std::vector<RequestId> done;
  while (!d.idle()) {
    if (auto c = d.step()) done.push_back(c->id);
  }
  EXPECT_EQ(done, ids);
}

TEST(Queue, StepOnEmptyQueueIsIdle) {
  Dpu d(0, 256);
  const auto before = d.counters();
  EXPECT_FALSE(d.step().has_value());
  EXPECT_EQ(d.counters(), before);
}

TEST(Queue, InvokeCompletesAfterScheduleLength) {
  Dpu d(0, 4096);
  // 2 stages over 2 slots, pipelined: 2 + 2 - 1 = 3 ticks.
  const auto code = code_of("init: SET_IMM.4 _, 0 -> W0\nsum: ADD.4 W0, L0[ROW] -> W0 @rows\n");
  d.store_code(1, encode(code), "t");
  auto l0 = d.alloc_data_line(4, 3);
  auto l1 = d.alloc_data_line(4, 3);
  ConveyorState cs;
  cs.code_id = 1;
  cs.slots = {SlotBinding{{0, l0.id}}, SlotBinding{{0, l1.id}}};
  const auto id = d.enqueue(cs);
  EXPECT_FALSE(d.step().has_value());
  EXPECT_FALSE(d.step().has_value());
  auto c = d.step();
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->id, id);
  EXPECT_EQ(c->conveyor.ticks, 3u);
  EXPECT_FALSE(c->error.has_value());
}

TEST(Queue, MissingCodeFailsRequestButQueueContinues) {
  Dpu d(0, 1024);
  ConveyorState cs;
  cs.code_id = 42;
  const auto bad = d.enqueue(cs);
  const auto good = d.enqueue(StorePairRequest{"k", {1}});
  auto c1 = d.step();
  ASSERT_TRUE(c1 && c1->error);
  EXPECT_EQ(c1->id, bad);
  EXPECT_EQ(c1->error->code(), Errc::NoCode);
  auto c2 = d.step();
  ASSERT_TRUE(c2);
  EXPECT_EQ(c2->id, good);
  EXPECT_FALSE(c2->error);
}

TEST(CodeCache, TracksResidentCodeLines) {
  Dpu d(0, 1024);
  const auto code = code_of("x: COPY.1 W0, _ -> W1\n");
  const auto line = d.store_code(5, encode(code), "m");
  EXPECT_TRUE(d.has_code(5));
  EXPECT_EQ(d.store_code(5, encode(code), "m"), line);
  EXPECT_EQ(d.load_code(5), code);
  d.free_line(line);
  EXPECT_FALSE(d.has_code(5));
  EXPECT_EQ(error_of([&] { d.code_bytes(5); }), Errc::NoCode);
}

TEST(Persistence, SaveLoadRoundTripsByteIdentically) {
  Dpu d(3, 2048);
  auto l = d.alloc_data_line(2, 10);
  std::vector<Value> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 65535};
  d.write_items(l.id, 0, v);
  d.store_record("kw", std::vector<std::uint8_t>{9, 8, 7});
  d.store_code(1, encode(code_of("s: SET_IMM.8 _, 7 -> W0\n")), "m");
  ConveyorState cs;
  cs.code_id = 1;
  cs.slots = {SlotBinding{}};
  d.enqueue(cs);
  d.enqueue(ReadItemsRequest{l.id, 2, 3});

  ByteWriter w;
  d.save(w);
  ByteReader r(w.data(), Errc::Io);
  Dpu back = Dpu::load(r);
  EXPECT_TRUE(r.done());
  ByteWriter w2;
  back.save(w2);
  EXPECT_EQ(w.data(), w2.data());
  EXPECT_TRUE(std::equal(d.nvm().content().begin(), d.nvm().content().end(), back.nvm().content().begin()));
  EXPECT_EQ(back.read_items(l.id, 0, 10), v);

  // Both copies behave identically afterwards.
  auto c1 = d.step();
  auto c2 = back.step();
  ASSERT_TRUE(c1 && c2);
  EXPECT_EQ(c1->conveyor.results, c2->conveyor.results);
  EXPECT_EQ(d.step()->values, back.step()->values);
}

TEST(Counters, MonotonicUnderRandomWork) {
  std::mt19937_64 rng(3);
  Dpu d(0, 4096);
  auto l = d.alloc_data_line(1, 64);
  CounterBlock prev = d.counters();
  for (int i = 0; i < 500; ++i) {
    switch (rng() % 3) {
      case 0: d.exec_elementary(Opcode::Add, rng() % 256, rng() % 256, Granularity::B1); break;
      case 1: d.enqueue(ReadItemsRequest{l.id, rng() % 64, 1}); break;
      default: d.step(); break;
    }
    const auto now = d.counters();
    const auto pf = prev.fields();
    const auto nf = now.fields();
    for (std::size_t k = 0; k < pf.size(); ++k) ASSERT_GE(nf[k].second, pf[k].second);
    prev = now;
  }
}
