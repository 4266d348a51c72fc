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

#include "hwfuzz/coverage.hpp"

#include <cstdint>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

namespace hwfuzz {
namespace {

CoverageVector Vec(std::vector<uint32_t> h) { return CoverageVector(std::move(h)); }

std::vector<uint64_t> Totals(const CumulativeCoverage& c) {
  return {c.hit_totals().begin(), c.hit_totals().end()};
}

TEST(CoverageVectorTest, CountsNonzeroEntries) {
  EXPECT_EQ(Vec({0, 3, 0, 1}).CoveredCount(), 2u);
  EXPECT_DOUBLE_EQ(Vec({0, 3, 0, 1}).CoveredFraction(), 0.5);
  EXPECT_DOUBLE_EQ(CoverageVector().CoveredFraction(), 0.0);
}

TEST(CumulativeCoverageTest, ReportsOnlyZeroToPositiveTransitions) {
  CumulativeCoverage cum(4);
  EXPECT_EQ(cum.Observe(Vec({0, 2, 0, 0})).new_points, (std::vector<size_t>{1}));
  EXPECT_TRUE(cum.Observe(Vec({0, 5, 0, 0})).empty());
  EXPECT_EQ(cum.Observe(Vec({1, 1, 0, 9})).new_points, (std::vector<size_t>{0, 3}));
  EXPECT_EQ(Totals(cum), (std::vector<uint64_t>{1, 8, 0, 9}));
  EXPECT_EQ(cum.covered_count(), 3u);
  EXPECT_DOUBLE_EQ(cum.CoverageRate(), 0.75);
}

TEST(CumulativeCoverageTest, AllZeroVectorIsNeverNew) {
  CumulativeCoverage cum(3);
  EXPECT_TRUE(cum.Observe(Vec({0, 0, 0})).empty());
  EXPECT_EQ(cum.covered_count(), 0u);
}

TEST(CumulativeCoverageTest, RejectsLengthMismatch) {
  CumulativeCoverage cum(3);
  EXPECT_THROW(cum.Observe(Vec({1, 2})), ContractViolation);
}

TEST(CumulativeCoverageTest, SaturatesInsteadOfWrapping) {
  CumulativeCoverage cum(1);
  const uint32_t big = std::numeric_limits<uint32_t>::max();
  // Enough observations to pass 2^64 would take forever, so only check
  // that large totals accumulate exactly.
  for (int i = 0; i < 4; ++i) cum.Observe(Vec({big}));
  EXPECT_EQ(cum.hit_totals()[0], 4ull * big);
}

TEST(CumulativeCoverageTest, RateNeedsCoverpoints) {
  CumulativeCoverage cum(0);
  EXPECT_THROW(cum.CoverageRate(), ContractViolation);
}

TEST(CumulativeCoverageTest, BatchMergeMatchesSequentialObserve) {
  CumulativeCoverage a(3), b(3);
  std::vector<CoverageVector> runs = {Vec({1, 0, 0}), Vec({1, 1, 0}), Vec({0, 0, 0})};
  const auto reports = a.MergeBatch(runs);
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_EQ(reports[0].new_points, (std::vector<size_t>{0}));
  EXPECT_EQ(reports[1].new_points, (std::vector<size_t>{1}));
  EXPECT_TRUE(reports[2].empty());
  for (const auto& r : runs) b.Observe(r);
  EXPECT_EQ(Totals(a), Totals(b));
}

TEST(CoverageSnapshotTest, RoundTrips) {
  CumulativeCoverage cum(3);
  cum.Observe(Vec({0, 4, 1}));
  cum.AddCoveringSeed(Vec({0, 4, 1}));
  std::stringstream io;
  WriteCoverageSnapshot(cum, io);
  const CoverageSnapshot snap = ReadCoverageSnapshot(io);
  EXPECT_EQ(snap.hit_totals, Totals(cum));
  EXPECT_EQ(snap.covering_seed_counts, (std::vector<uint32_t>{0, 1, 1}));
  EXPECT_EQ(snap.covered_count(), 2u);
}

TEST(CoverageSnapshotTest, RejectsInconsistentHeader) {
  std::stringstream io("coverpoints=2 covered=2\n0\t1\t0\n1\t0\t0\n");
  EXPECT_THROW(ReadCoverageSnapshot(io), ConfigError);
}

}  // namespace
}  // namespace hwfuzz
