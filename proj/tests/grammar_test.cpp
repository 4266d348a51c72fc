// Copyright 2026 The hwfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hwfuzz/grammar.hpp"

#include <sstream>

#include <gtest/gtest.h>

#include "hwfuzz/rng.hpp"

namespace hwfuzz {
namespace {

std::vector<uint8_t> RandomBytes(Rng& rng, size_t n) {
  std::vector<uint8_t> v(n);
  for (auto& b : v) b = rng.Byte();
  return v;
}

bool BitOf(std::span<const uint8_t> bytes, size_t bit) {
  return bit / 8 < bytes.size() && ((bytes[bit / 8] >> (bit % 8)) & 1);
}

// Bit-by-bit reference for raw-bits packing: cycle c, bit b comes from
// chromosome bit c*8*ceil(w/8) + b when b < w, and is zero otherwise.
TEST(RawBitsTest, MatchesBitLevelOracle) {
  Rng rng(11);
  for (size_t width : {1u, 3u, 7u, 8u, 9u, 13u, 16u, 35u, 64u, 65u, 100u}) {
    for (size_t len = 0; len < 40; ++len) {
      const auto bytes = RandomBytes(rng, len);
      const Stimulus s = Translate(bytes, width, GrammarMode::RawBits());
      const size_t group = (width + 7) / 8;
      ASSERT_EQ(s.cycles(), (len + group - 1) / group) << "width " << width;
      for (size_t c = 0; c < s.cycles(); ++c) {
        const auto cycle = s.Cycle(c);
        ASSERT_EQ(cycle.size(), group);
        for (size_t b = 0; b < group * 8; ++b) {
          const bool expect = b < width && BitOf(bytes, c * group * 8 + b);
          ASSERT_EQ(BitOf(cycle, b), expect) << "width " << width << " cycle " << c << " bit " << b;
        }
      }
    }
  }
}

TEST(RawBitsTest, EmptyChromosomeIsZeroCycles) {
  EXPECT_EQ(Translate({}, 64, GrammarMode::RawBits()).cycles(), 0u);
  EXPECT_THROW(Translate({}, 0, GrammarMode::RawBits()), ContractViolation);
}

std::vector<TransactionTemplate> Table() {
  return {{"idle", 0, 1}, {"write", 2, 2}, {"burst", 3, 4}};
}

TEST(TransactionTest, ExpandsTemplatesWithPayloadAndPadding) {
  const GrammarMode mode = GrammarMode::Transactions(Table());
  // 4 % 3 = 1 selects "write"; its payload is 0xaa 0xbb. Then "burst" runs
  // out of bytes and zero-pads its payload.
  const std::vector<uint8_t> bytes = {4, 0xaa, 0xbb, 0, 2, 0x11};
  const Stimulus s = Translate(bytes, 40, mode, 77);
  EXPECT_EQ(s.source_chromosome_id, 77u);
  ASSERT_EQ(s.transactions.size(), 3u);
  EXPECT_EQ(s.transactions[0].template_index, 1u);
  EXPECT_EQ(s.transactions[1].template_index, 0u);
  EXPECT_EQ(s.transactions[2].payload, (std::vector<uint8_t>{0x11, 0, 0}));
  ASSERT_EQ(s.cycles(), 2u + 1u + 4u);
  EXPECT_EQ(std::vector<uint8_t>(s.Cycle(1).begin(), s.Cycle(1).end()),
            (std::vector<uint8_t>{1, 1, 0xaa, 0xbb, 0}));
  EXPECT_EQ(std::vector<uint8_t>(s.Cycle(6).begin(), s.Cycle(6).end()),
            (std::vector<uint8_t>{2, 3, 0x11, 0, 0}));
}

// Independent walk of the transaction rule over random chromosomes.
TEST(TransactionTest, MatchesReferenceWalk) {
  const auto table = Table();
  const GrammarMode mode = GrammarMode::Transactions(table);
  Rng rng(3);
  for (size_t width : {5u, 16u, 21u, 35u}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto bytes = RandomBytes(rng, rng.Below(30));
      std::vector<std::vector<uint8_t>> expect;
      const size_t group = (width + 7) / 8;
      for (size_t pos = 0; pos < bytes.size();) {
        const size_t t = bytes[pos++] % table.size();
        std::vector<uint8_t> payload;
        for (size_t k = 0; k < table[t].payload_bytes; ++k) {
          payload.push_back(pos < bytes.size() ? bytes[pos++] : 0);
        }
        for (size_t c = 0; c < table[t].cycles; ++c) {
          std::vector<uint8_t> word(group, 0);
          std::vector<uint8_t> full = {static_cast<uint8_t>(t), static_cast<uint8_t>(c)};
          full.insert(full.end(), payload.begin(), payload.end());
          for (size_t bit = 0; bit < width; ++bit) {
            if (BitOf(full, bit)) word[bit / 8] |= static_cast<uint8_t>(1u << (bit % 8));
          }
          expect.push_back(word);
        }
      }
      const Stimulus s = Translate(bytes, width, mode);
      ASSERT_EQ(s.cycles(), expect.size());
      for (size_t c = 0; c < expect.size(); ++c) {
        ASSERT_EQ(std::vector<uint8_t>(s.Cycle(c).begin(), s.Cycle(c).end()), expect[c]);
      }
    }
  }
}

TEST(TemplateTableTest, ParsesAndRoundTrips) {
  std::istringstream in("# opcode\tname\tpayload\tcycles\n0\tnop\t0\t1\n\n1\twr\t2\t3\n");
  const auto table = ParseTemplateTable(in, "t.tsv");
  ASSERT_EQ(table.size(), 2u);
  EXPECT_EQ(table[1], (TransactionTemplate{"wr", 2, 3}));
  std::stringstream io;
  WriteTemplateTable(table, io);
  EXPECT_EQ(ParseTemplateTable(io, "rt"), table);
}

TEST(TemplateTableTest, ErrorsNameTheLine) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return ParseTemplateTable(in, "t.tsv");
  };
  EXPECT_THROW(parse(""), ConfigError);
  EXPECT_THROW(parse("0\tnop\t0\n"), ConfigError);
  EXPECT_THROW(parse("0\tnop\t0\t0\n"), ConfigError);
  EXPECT_THROW(parse("1\tnop\t0\t1\n"), ConfigError);
  EXPECT_THROW(parse("0\ta\t0\t1\n0\tb\t0\t1\n"), ConfigError);
  try {
    parse("0\tnop\t0\t1\n1\tx\tq\t1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("t.tsv:2"), std::string::npos);
  }
}

TEST(DecodeReportTest, ListsCyclesOrTransactions) {
  const Stimulus raw = Translate(std::vector<uint8_t>{0x34, 0x12, 0xff}, 12, GrammarMode::RawBits(), 4);
  EXPECT_EQ(DecodeReport(raw),
            "# stimulus chromosome=4 mode=raw-bits width=12 cycles=2\n"
            "cycle 0: 0x0234\n"
            "cycle 1: 0x00ff\n");
  const Stimulus txn = Translate(std::vector<uint8_t>{1, 0xab, 0xcd}, 32,
                                 GrammarMode::Transactions(Table()));
  EXPECT_EQ(DecodeReport(txn, Table()),
            "# stimulus chromosome=0 mode=transaction width=32 cycles=2\n"
            "txn 0 @0: write payload=abcd cycles=2\n");
}

}  // namespace
}  // namespace hwfuzz
