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

// File formats: corpus directories, config files, reports, bench CSV.

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "hwfuzz/bench.hpp"
#include "hwfuzz/config.hpp"
#include "hwfuzz/corpus_io.hpp"
#include "hwfuzz/report.hpp"
#include "hwfuzz/settings.hpp"

namespace hwfuzz {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::vector<Chromosome> Sample() {
  std::vector<Chromosome> v(3);
  v[0].id = 7;
  v[0].bytes = {1, 2, 3};
  v[1].id = 2;
  v[1].bytes = {};
  v[2].id = 11;
  v[2].bytes = std::vector<uint8_t>(50, 0xee);
  return v;
}

TEST(CorpusIoTest, RoundTripsInManifestOrder) {
  TempDir dir("hwfuzz-io-roundtrip");
  SaveCorpus(Sample(), dir.path());
  const LoadedCorpus loaded = LoadCorpus(dir.path(), 1024);
  ASSERT_EQ(loaded.chromosomes.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(loaded.chromosomes[i].id, Sample()[i].id);
    EXPECT_EQ(loaded.chromosomes[i].bytes, Sample()[i].bytes);
    EXPECT_EQ(loaded.chromosomes[i].origin, Origin::kInitialSeed);
  }
  EXPECT_TRUE(loaded.warnings.empty());
}

TEST(CorpusIoTest, SaveReplacesStaleSeeds) {
  TempDir dir("hwfuzz-io-stale");
  SaveCorpus(Sample(), dir.path());
  const std::vector<Chromosome> one = {Sample().front()};
  SaveCorpus(one, dir.path());
  EXPECT_FALSE(fs::exists(dir.path() / "seed-11.bin"));
  EXPECT_EQ(LoadCorpus(dir.path(), 1024).chromosomes.size(), 1u);
}

TEST(CorpusIoTest, WithoutManifestLoadsSeedFilesById) {
  TempDir dir("hwfuzz-io-nomanifest");
  SaveCorpus(Sample(), dir.path());
  fs::remove(dir.path() / "manifest.txt");
  const LoadedCorpus loaded = LoadCorpus(dir.path(), 1024);
  ASSERT_EQ(loaded.chromosomes.size(), 3u);
  EXPECT_EQ(loaded.chromosomes[0].id, 2u);
  EXPECT_EQ(loaded.chromosomes[1].id, 7u);
  EXPECT_EQ(loaded.chromosomes[2].id, 11u);
}

TEST(CorpusIoTest, OversizedSeedsAreSkippedWithAWarning) {
  TempDir dir("hwfuzz-io-oversize");
  SaveCorpus(Sample(), dir.path());
  const LoadedCorpus loaded = LoadCorpus(dir.path(), 10);
  EXPECT_EQ(loaded.chromosomes.size(), 2u);
  ASSERT_EQ(loaded.warnings.size(), 1u);
  EXPECT_NE(loaded.warnings[0].find("seed-11.bin"), std::string::npos);
}

TEST(CorpusIoTest, ErrorsNameTheFile) {
  TempDir dir("hwfuzz-io-errors");
  auto expect_error = [&](const std::string& needle) {
    try {
      LoadCorpus(dir.path(), 1024);
      FAIL() << "expected CorpusError";
    } catch (const CorpusError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_error("no seeds found");
  SaveCorpus(Sample(), dir.path());
  {
    std::ofstream(dir.path() / "seed-7.bin", std::ios::binary) << "xy";
  }
  expect_error("seed-7.bin");
  {
    std::ofstream(dir.path() / "manifest.txt") << "7\tnot-a-number\n";
  }
  expect_error("manifest.txt");
  EXPECT_THROW(LoadCorpus(dir.path() / "missing", 1024), CorpusError);
}

TEST(CorpusIoTest, LoadCorpusStateRecomputesCoverage) {
  TempDir dir("hwfuzz-io-state");
  SaveCorpus(Sample(), dir.path());
  auto run = [](const Chromosome& c) {
    CoverageVector v(4);
    v.hits[c.bytes.size() % 4] = 1;
    return v;
  };
  const Corpus corpus = LoadCorpusState(dir.path(), 4, FitnessParams{}, 1024, run);
  EXPECT_EQ(corpus.size(), 3u);
  EXPECT_EQ(corpus.pending_initial(), 0u);
  EXPECT_EQ(corpus.cumulative().covered_count(), 3u);  // lengths 3, 0, 50 -> slots 3, 0, 2
}

TEST(ConfigTest, ParsesKeyValueLines) {
  std::istringstream in("# comment\nmax-iters = 10\n  dut=toy-cpu   # trailing\n\n");
  const KeyValueFile kv = KeyValueFile::Parse(in, "c.conf");
  EXPECT_EQ(kv.Get("max_iters").value(), "10");
  EXPECT_EQ(kv.Get("dut").value(), "toy-cpu");
  EXPECT_FALSE(kv.Get("threads").has_value());
  std::istringstream bad("just words\n");
  EXPECT_THROW(KeyValueFile::Parse(bad, "c.conf"), ConfigError);
}

TEST(SettingsTest, AppliesEveryCampaignKey) {
  KeyValueFile kv;
  kv.Set("dut", "periph-fsm");
  kv.Set("mode", "pipelined");
  kv.Set("threads", "4");
  kv.Set("batch_size", "8");
  kv.Set("max_iters", "123");
  kv.Set("stagnation", "0");
  kv.Set("master_seed", "9");
  kv.Set("favor", "2.5");
  kv.Set("p_splice", "0.5");
  kv.Set("strategy", "random");
  kv.Set("collection", "report-file");
  kv.Set("stop_on_finding", "true");
  kv.Set("dut_cmd", "sim --x");
  FuzzConfig cfg;
  ApplySettings(kv, cfg);
  EXPECT_EQ(cfg.dut, "periph-fsm");
  EXPECT_EQ(cfg.mode, ExecMode::kPipelined);
  EXPECT_EQ(cfg.threads, 4u);
  EXPECT_EQ(cfg.effective_batch_size(), 8u);
  EXPECT_EQ(cfg.max_iterations, 123u);
  EXPECT_EQ(cfg.stagnation_window, 0u);
  EXPECT_EQ(cfg.master_seed, 9u);
  EXPECT_DOUBLE_EQ(cfg.fitness.favor, 2.5);
  EXPECT_DOUBLE_EQ(cfg.mutation.p_splice, 0.5);
  EXPECT_EQ(cfg.mutation.strategy, InputStrategy::kRandom);
  EXPECT_EQ(cfg.collection, CoverageCollection::kReportFile);
  EXPECT_TRUE(cfg.stop_on_finding);
  EXPECT_EQ(cfg.dut_cmd, (std::vector<std::string>{"sim", "--x"}));
}

TEST(SettingsTest, RejectsBadValuesAndUnknownKeys) {
  auto apply = [](const std::string& key, const std::string& value) {
    KeyValueFile kv;
    kv.Set(key, value);
    FuzzConfig cfg;
    ApplySettings(kv, cfg);
  };
  EXPECT_THROW(apply("threads", "four"), ConfigError);
  EXPECT_THROW(apply("threads", "-1"), ConfigError);
  EXPECT_THROW(apply("mode", "warp"), ConfigError);
  EXPECT_THROW(apply("favor", "0.5"), ConfigError);
  EXPECT_THROW(apply("max_iterz", "5"), ConfigError);
  EXPECT_THROW(apply("stop_on_finding", "maybe"), ConfigError);
  EXPECT_THROW(apply("threads", "3"), ConfigError);  // serial with 3 threads
}

CampaignReport SampleReport() {
  CampaignReport r;
  r.dut = "toy-cpu";
  r.mode = "batch";
  r.threads = 2;
  r.batch_size = 4;
  r.master_seed = 3;
  r.stop_reason = "stagnation";
  r.iterations = 100;
  r.inputs_executed = 400;
  r.cycles_executed = 9000;
  r.coverpoints = 10;
  r.covered = 7;
  r.coverage_rate = 0.7;
  r.corpus_size = 5;
  r.retained_seeds = 3;
  r.findings = 2;
  r.first_finding_iteration = 42;
  r.first_finding = "bad thing";
  r.trajectory = {{0, 3}, {5, 6}, {60, 7}};
  r.wall_seconds = 1.5;
  r.throughput = 6000;
  r.timer.Record(Stage::kSimulation, Seconds(1.0));
  r.timer.Record(Stage::kMutation, Seconds(0.25));
  r.timer.Record(Stage::kCoverageCorpus, Seconds(0.25));
  return r;
}

TEST(ReportTest, RoundTripsThroughText) {
  std::stringstream io;
  WriteReport(SampleReport(), io);
  const CampaignReport back = ParseReport(KeyValueFile::Parse(io, "r"), "r");
  EXPECT_EQ(DeterministicReportText(back), DeterministicReportText(SampleReport()));
  EXPECT_NEAR(back.timer.seconds(Stage::kSimulation), 1.0, 1e-6);
  EXPECT_EQ(back.IterationsToReach(6), 6);
  EXPECT_EQ(back.IterationsToReach(8), -1);
}

TEST(ReportTest, RejectsForeignFiles) {
  std::istringstream in("format = something-else\n");
  EXPECT_THROW(ParseReport(KeyValueFile::Parse(in, "x"), "x"), ConfigError);
  std::istringstream partial("format = hwfuzz-report-1\ndut = a\n");
  EXPECT_THROW(ParseReport(KeyValueFile::Parse(partial, "x"), "x"), ConfigError);
}

TEST(ReportTest, ZeroIterationReportShowsZeroRate) {
  CampaignReport r;
  r.dut = "toy-cpu";
  r.mode = "serial";
  r.stop_reason = "max-iterations";
  r.coverpoints = 192;
  std::stringstream io;
  WriteReport(r, io);
  EXPECT_NE(io.str().find("coverage_rate = 0.000000"), std::string::npos);
}

TEST(BenchCsvTest, ParsesBackToTheTable) {
  std::vector<BenchRow> rows(3);
  rows[0] = {ExecMode::kSerial, 1, 1000.0, 1.0, 0, 0};
  rows[1] = {ExecMode::kBatch, 4, 3210.5, 3.2105, 0, 0};
  rows[2] = {ExecMode::kPipelined, 4, 3400.25, 3.40025, 0, 0};
  std::stringstream io;
  WriteBenchCsv(rows, io);
  const auto back = ParseBenchCsv(io);
  ASSERT_EQ(back.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].mode, rows[i].mode);
    EXPECT_EQ(back[i].threads, rows[i].threads);
    EXPECT_NEAR(back[i].throughput, rows[i].throughput, 0.005);
    EXPECT_NEAR(back[i].speedup, rows[i].speedup, 0.005);
  }
  const std::string table = FormatBenchTable(back);
  EXPECT_NE(table.find("1.00x"), std::string::npos);
  EXPECT_NE(table.find("3.21x"), std::string::npos);
  EXPECT_NE(table.find("3400.25"), std::string::npos);
}

}  // namespace
}  // namespace hwfuzz
