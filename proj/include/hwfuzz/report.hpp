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

// CampaignReport and its on-disk form.
//
// report.txt is a flat key = value document. Keys above the "# timing" line
// are reproducible from (config, master seed, seeds); keys below it depend on
// wall-clock time.
//
//   format                     hwfuzz-report-1
//   dut, mode, threads, batch_size, master_seed, collection
//   stop_reason                max-iterations | stagnation | time-budget |
//                              finding | error
//   error                      message, only when stop_reason = error
//   iterations                 merged iterations
//   inputs_executed, cycles_executed
//   coverpoints, covered, coverage_rate
//   corpus_size                seeds in the pool, initial seeds included
//   retained_seeds             seeds retained for new coverage
//   findings                   failing checks observed
//   first_finding_iteration, first_finding   (when findings > 0)
//   trajectory                 "<iteration>:<covered>" at every change
//   --- timing ---
//   wall_seconds, throughput_cycles_per_sec
//   time_mutation, time_simulation, time_coverage_corpus   seconds
//   time_coverage_collection   seconds spent reading coverage out of DUTs
//   share_kind                 exclusive | utilization
//   share_mutation, share_simulation, share_coverage_corpus   percent

#ifndef HWFUZZ_REPORT_HPP_
#define HWFUZZ_REPORT_HPP_

#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hwfuzz/config.hpp"
#include "hwfuzz/stats.hpp"

namespace hwfuzz {

struct CampaignReport {
  std::string dut;
  std::string mode;
  size_t threads = 1;
  size_t batch_size = 1;
  uint64_t master_seed = 0;
  std::string collection = "direct";
  std::string stop_reason;
  std::string error;

  uint64_t iterations = 0;
  uint64_t inputs_executed = 0;
  uint64_t cycles_executed = 0;
  size_t coverpoints = 0;
  size_t covered = 0;
  double coverage_rate = 0.0;
  size_t corpus_size = 0;
  size_t retained_seeds = 0;
  uint64_t findings = 0;
  uint64_t first_finding_iteration = 0;
  std::string first_finding;
  std::vector<std::pair<uint64_t, size_t>> trajectory;

  // Wall-clock dependent.
  double wall_seconds = 0.0;
  double throughput = 0.0;
  StageTimer timer;
  double coverage_collection_seconds = 0.0;
  bool overlapped_stages = false;

  // First iteration after which at least `points` coverpoints were covered,
  // or -1 if never.
  int64_t IterationsToReach(size_t points) const {
    for (const auto& [iter, cov] : trajectory) {
      if (cov >= points) return static_cast<int64_t>(iter) + 1;
    }
    return -1;
  }

  StageShares Breakdown() const {
    if (overlapped_stages) {
      return wall_seconds > 0 ? timer.Utilization(wall_seconds) : StageShares{};
    }
    return timer.Shares();
  }
};

inline std::string FormatTrajectory(const std::vector<std::pair<uint64_t, size_t>>& t) {
  std::ostringstream out;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out << ',';
    out << t[i].first << ':' << t[i].second;
  }
  return out.str();
}

inline std::vector<std::pair<uint64_t, size_t>> ParseTrajectory(const std::string& s) {
  std::vector<std::pair<uint64_t, size_t>> t;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("bad trajectory entry '" + item + "'");
    t.emplace_back(std::stoull(item.substr(0, colon)), std::stoull(item.substr(colon + 1)));
  }
  return t;
}

inline void WriteReport(const CampaignReport& r, std::ostream& out, bool with_timing = true) {
  out << "# hwfuzz campaign report\n";
  out << "format = hwfuzz-report-1\n";
  out << "dut = " << r.dut << "\n";
  out << "mode = " << r.mode << "\n";
  out << "threads = " << r.threads << "\n";
  out << "batch_size = " << r.batch_size << "\n";
  out << "master_seed = " << r.master_seed << "\n";
  out << "collection = " << r.collection << "\n";
  out << "stop_reason = " << r.stop_reason << "\n";
  if (!r.error.empty()) out << "error = " << r.error << "\n";
  out << "iterations = " << r.iterations << "\n";
  out << "inputs_executed = " << r.inputs_executed << "\n";
  out << "cycles_executed = " << r.cycles_executed << "\n";
  out << "coverpoints = " << r.coverpoints << "\n";
  out << "covered = " << r.covered << "\n";
  out << "coverage_rate = " << std::fixed << std::setprecision(6) << r.coverage_rate << "\n";
  out << "corpus_size = " << r.corpus_size << "\n";
  out << "retained_seeds = " << r.retained_seeds << "\n";
  out << "findings = " << r.findings << "\n";
  if (r.findings > 0) {
    out << "first_finding_iteration = " << r.first_finding_iteration << "\n";
    out << "first_finding = " << r.first_finding << "\n";
  }
  out << "trajectory = " << FormatTrajectory(r.trajectory) << "\n";
  if (!with_timing) return;
  const StageShares shares = r.Breakdown();
  out << "# timing (wall-clock; not reproducible)\n";
  out << std::setprecision(6);
  out << "wall_seconds = " << r.wall_seconds << "\n";
  out << "throughput_cycles_per_sec = " << std::setprecision(2) << r.throughput << "\n";
  out << std::setprecision(6);
  out << "time_mutation = " << r.timer.seconds(Stage::kMutation) << "\n";
  out << "time_simulation = " << r.timer.seconds(Stage::kSimulation) << "\n";
  out << "time_coverage_corpus = " << r.timer.seconds(Stage::kCoverageCorpus) << "\n";
  out << "time_coverage_collection = " << r.coverage_collection_seconds << "\n";
  out << "share_kind = " << (r.overlapped_stages ? "utilization" : "exclusive") << "\n";
  out << std::setprecision(2);
  out << "share_mutation = " << 100.0 * shares.mutation << "\n";
  out << "share_simulation = " << 100.0 * shares.simulation << "\n";
  out << "share_coverage_corpus = " << 100.0 * shares.coverage_corpus << "\n";
  out << std::defaultfloat;
}

inline std::string DeterministicReportText(const CampaignReport& r) {
  std::ostringstream out;
  WriteReport(r, out, /*with_timing=*/false);
  return out.str();
}

// Reads back the fields the report command and tests need.
inline CampaignReport ParseReport(const KeyValueFile& kv, const std::string& origin) {
  if (kv.Require("format", origin) != "hwfuzz-report-1") {
    throw ConfigError(origin + ": not an hwfuzz report");
  }
  CampaignReport r;
  auto num = [&](const char* key) { return std::stoull(kv.Require(key, origin)); };
  auto real = [&](const char* key, double fallback) {
    auto v = kv.Get(key);
    return v ? std::stod(*v) : fallback;
  };
  try {
    r.dut = kv.Require("dut", origin);
    r.mode = kv.Require("mode", origin);
    r.threads = num("threads");
    r.batch_size = num("batch_size");
    r.master_seed = num("master_seed");
    r.collection = kv.Get("collection").value_or("direct");
    r.stop_reason = kv.Require("stop_reason", origin);
    r.error = kv.Get("error").value_or("");
    r.iterations = num("iterations");
    r.inputs_executed = num("inputs_executed");
    r.cycles_executed = num("cycles_executed");
    r.coverpoints = num("coverpoints");
    r.covered = num("covered");
    r.coverage_rate = std::stod(kv.Require("coverage_rate", origin));
    r.corpus_size = num("corpus_size");
    r.retained_seeds = num("retained_seeds");
    r.findings = num("findings");
    if (r.findings > 0) {
      r.first_finding_iteration = num("first_finding_iteration");
      r.first_finding = kv.Get("first_finding").value_or("");
    }
    r.trajectory = ParseTrajectory(kv.Get("trajectory").value_or(""));
    r.wall_seconds = real("wall_seconds", 0.0);
    r.throughput = real("throughput_cycles_per_sec", 0.0);
    r.timer.Record(Stage::kMutation, Seconds(real("time_mutation", 0.0)));
    r.timer.Record(Stage::kSimulation, Seconds(real("time_simulation", 0.0)));
    r.timer.Record(Stage::kCoverageCorpus, Seconds(real("time_coverage_corpus", 0.0)));
    r.coverage_collection_seconds = real("time_coverage_collection", 0.0);
    r.overlapped_stages = kv.Get("share_kind").value_or("exclusive") == "utilization";
  } catch (const std::invalid_argument&) {
    throw ConfigError(origin + ": malformed numeric field");
  } catch (const std::out_of_range&) {
    throw ConfigError(origin + ": numeric field out of range");
  }
  return r;
}

// Stage breakdown as printed by `report` and at the end of `run`.
inline std::string StageTimingReport(const CampaignReport& r) {
  const StageShares s = r.Breakdown();
  std::ostringstream out;
  out << std::fixed << std::setprecision(1);
  out << (r.overlapped_stages ? "stage utilization (% of wall time, stages overlap):\n"
                              : "stage time (% of attributed time):\n");
  out << "  coverage+corpus " << std::setw(6) << 100.0 * s.coverage_corpus << "%\n";
  out << "  mutation        " << std::setw(6) << 100.0 * s.mutation << "%\n";
  out << "  simulation      " << std::setw(6) << 100.0 * s.simulation << "%\n";
  return out.str();
}

inline std::string SummaryText(const CampaignReport& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "dut " << r.dut << ", mode " << r.mode << ", threads " << r.threads
      << ", batch " << r.batch_size << ", seed " << r.master_seed << "\n";
  out << "stopped: " << r.stop_reason;
  if (!r.error.empty()) out << " (" << r.error << ")";
  out << " after " << r.iterations << " iterations, " << r.inputs_executed
      << " inputs, " << r.cycles_executed << " cycles\n";
  out << "coverage_rate " << r.coverage_rate << " (" << r.covered << "/"
      << r.coverpoints << ")\n";
  out << "corpus " << r.corpus_size << " seeds (" << r.retained_seeds
      << " retained), findings " << r.findings << "\n";
  out << std::setprecision(1) << "throughput " << r.throughput
      << " cycles/s over " << std::setprecision(3) << r.wall_seconds << " s\n";
  out << StageTimingReport(r);
  return out.str();
}

}  // namespace hwfuzz

#endif  // HWFUZZ_REPORT_HPP_
