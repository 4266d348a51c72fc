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

#include "hwfuzz/stats.hpp"

#include <thread>

#include <gtest/gtest.h>

#include "hwfuzz/duts/witness.hpp"
#include "hwfuzz/executor.hpp"

namespace hwfuzz {
namespace {

TEST(StatsTest, ThroughputIsCyclesPerSecond) {
  EXPECT_DOUBLE_EQ(Throughput(1000, 2.0), 500.0);
  EXPECT_THROW(Throughput(1000, 0.0), ContractViolation);
}

TEST(StatsTest, SharesSplitAttributedTime) {
  StageTimer t;
  t.Record(Stage::kMutation, Seconds(1.0));
  t.Record(Stage::kSimulation, Seconds(1.0));
  t.Record(Stage::kCoverageCorpus, Seconds(2.0));
  const StageShares s = t.Shares();
  EXPECT_DOUBLE_EQ(s.mutation, 0.25);
  EXPECT_DOUBLE_EQ(s.simulation, 0.25);
  EXPECT_DOUBLE_EQ(s.coverage_corpus, 0.5);
  EXPECT_DOUBLE_EQ(s.sum(), 1.0);
  const StageShares u = t.Utilization(2.0);
  EXPECT_DOUBLE_EQ(u.sum(), 2.0);
  EXPECT_THROW(t.Record(Stage::kMutation, Seconds(-1.0)), ContractViolation);
}

TEST(StatsTest, MergeAccumulates) {
  StageTimer a, b;
  a.Record(Stage::kSimulation, Seconds(1.0));
  a.AddCycles(10);
  b.Record(Stage::kSimulation, Seconds(0.5));
  b.AddCycles(5);
  b.AddIteration();
  a.Merge(b);
  EXPECT_DOUBLE_EQ(a.seconds(Stage::kSimulation), 1.5);
  EXPECT_EQ(a.cycles(), 15u);
  EXPECT_EQ(a.iterations(), 1u);
}

TEST(StatsTest, ScopedStageChargesItsScope) {
  StageTimer t;
  {
    ScopedStage s(t, Stage::kMutation);
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  EXPECT_GE(t.seconds(Stage::kMutation), 0.019);
  EXPECT_EQ(t.seconds(Stage::kSimulation), 0.0);
}

TEST(StatsTest, SerialStagesAccountForWallTime) {
  FuzzConfig cfg;
  cfg.dut = "periph-fsm";
  cfg.max_iterations = 20000;
  cfg.stagnation_window = 0;
  std::vector<Chromosome> seeds;
  for (const auto& b : duts::BundledSeeds(cfg.dut)) {
    Chromosome c;
    c.id = seeds.size();
    c.bytes = b;
    seeds.push_back(c);
  }
  Campaign campaign(cfg, MakeDutFactory(cfg), seeds);
  const CampaignReport r = campaign.Run();
  const double attributed = r.timer.attributed_seconds();
  EXPECT_GE(attributed, 0.95 * r.wall_seconds);
  EXPECT_LE(attributed, r.wall_seconds);
  EXPECT_NEAR(r.Breakdown().sum(), 1.0, 0.01);
  EXPECT_DOUBLE_EQ(r.throughput, static_cast<double>(r.cycles_executed) / r.wall_seconds);
}

TEST(StatsTest, PipelinedReportsUtilization) {
  FuzzConfig cfg;
  cfg.dut = "toy-cpu";
  cfg.mode = ExecMode::kPipelined;
  cfg.threads = 2;
  cfg.max_iterations = 500;
  std::vector<Chromosome> seeds;
  for (const auto& b : duts::BundledSeeds(cfg.dut)) {
    Chromosome c;
    c.id = seeds.size();
    c.bytes = b;
    seeds.push_back(c);
  }
  Campaign campaign(cfg, MakeDutFactory(cfg), seeds);
  const CampaignReport r = campaign.Run();
  EXPECT_TRUE(r.overlapped_stages);
  EXPECT_NE(StageTimingReport(r).find("utilization"), std::string::npos);
}

}  // namespace
}  // namespace hwfuzz
