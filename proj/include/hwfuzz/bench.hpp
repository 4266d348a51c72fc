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

// Throughput sweep over execution modes and thread counts.
//
// Every configuration runs the same campaign for a fixed wall-clock budget
// and reports simulated input cycles per second. Speedups are relative to
// the serial row.

#ifndef HWFUZZ_BENCH_HPP_
#define HWFUZZ_BENCH_HPP_

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hwfuzz/executor.hpp"

namespace hwfuzz {

struct BenchRow {
  ExecMode mode = ExecMode::kSerial;
  size_t threads = 1;
  double throughput = 0.0;
  double speedup = 0.0;
  uint64_t cycles = 0;
  double wall_seconds = 0.0;

  std::string Label() const {
    if (mode == ExecMode::kSerial) return "serial";
    return std::string(mode == ExecMode::kBatch ? "batch" : "pipelined") + " " +
           std::to_string(threads) + " thread" + (threads == 1 ? "" : "s");
  }
};

struct BenchOptions {
  // Template for every configuration; mode, threads and budget are overridden.
  FuzzConfig base;
  std::vector<size_t> thread_counts = {1, 2, 4, 8, 16};
  std::vector<ExecMode> modes = {ExecMode::kBatch, ExecMode::kPipelined};
  double seconds_per_config = 2.0;
  // Clamp thread counts to the hardware instead of only warning.
  bool cap_to_cores = false;
};

inline size_t HardwareThreads() {
  return std::max<size_t>(1, std::thread::hardware_concurrency());
}

inline BenchRow BenchOne(const BenchOptions& opts, const DutFactory& factory,
                         const std::vector<Chromosome>& seeds, ExecMode mode,
                         size_t threads) {
  FuzzConfig cfg = opts.base;
  cfg.mode = mode;
  cfg.threads = threads;
  cfg.batch_size = 0;
  cfg.max_iterations = UINT64_MAX;
  cfg.stagnation_window = 0;
  cfg.max_seconds = opts.seconds_per_config;
  cfg.stop_on_finding = false;
  cfg.out_dir.clear();
  Campaign campaign(cfg, factory, seeds);
  const CampaignReport r = campaign.Run();
  BenchRow row;
  row.mode = mode;
  row.threads = threads;
  row.cycles = r.cycles_executed;
  row.wall_seconds = r.wall_seconds;
  row.throughput = r.throughput;
  return row;
}

// The first row is always the serial baseline.
inline std::vector<BenchRow> RunBench(const BenchOptions& opts,
                                      const std::vector<Chromosome>& seeds,
                                      std::vector<std::string>* warnings = nullptr) {
  if (!(opts.seconds_per_config > 0)) throw ConfigError("bench budget must be > 0 seconds");
  const DutFactory factory = MakeDutFactory(opts.base);
  const size_t cores = HardwareThreads();
  std::vector<size_t> counts;
  for (size_t t : opts.thread_counts) {
    if (t == 0) throw ConfigError("bench thread counts must be >= 1");
    if (t > cores) {
      if (opts.cap_to_cores) continue;
      if (warnings) {
        warnings->push_back(std::to_string(t) + " threads exceed the " +
                            std::to_string(cores) + " available cores");
      }
    }
    if (std::find(counts.begin(), counts.end(), t) == counts.end()) counts.push_back(t);
  }
  if (counts.empty()) counts.push_back(1);

  std::vector<BenchRow> rows;
  rows.push_back(BenchOne(opts, factory, seeds, ExecMode::kSerial, 1));
  for (ExecMode m : opts.modes) {
    if (m == ExecMode::kSerial) continue;
    for (size_t t : counts) rows.push_back(BenchOne(opts, factory, seeds, m, t));
  }
  const double base = rows.front().throughput;
  for (auto& r : rows) r.speedup = base > 0 ? r.throughput / base : 0.0;
  rows.front().speedup = 1.0;
  return rows;
}

inline const BenchRow* FindRow(const std::vector<BenchRow>& rows, ExecMode mode, size_t threads) {
  for (const auto& r : rows) {
    if (r.mode == mode && r.threads == threads) return &r;
  }
  return nullptr;
}

inline void WriteBenchCsv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "mode,threads,throughput_cycles_per_sec,speedup\n";
  for (const auto& r : rows) {
    out << ExecModeName(r.mode) << "," << r.threads << "," << std::fixed
        << std::setprecision(2) << r.throughput << "," << r.speedup << "\n";
  }
}

inline std::vector<BenchRow> ParseBenchCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "mode,threads,throughput_cycles_per_sec,speedup") {
    throw ConfigError("bench csv: unexpected header");
  }
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string mode, threads, tput, speedup;
    if (!std::getline(fields, mode, ',') || !std::getline(fields, threads, ',') ||
        !std::getline(fields, tput, ',') || !std::getline(fields, speedup, ',')) {
      throw ConfigError("bench csv: malformed row '" + line + "'");
    }
    BenchRow r;
    r.mode = ParseExecMode(mode);
    r.threads = std::stoul(threads);
    r.throughput = std::stod(tput);
    r.speedup = std::stod(speedup);
    rows.push_back(r);
  }
  return rows;
}

// Speedup table: one row per configuration, serial baseline at 1.00x.
inline std::string FormatBenchTable(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(22) << "configuration" << std::right << std::setw(18)
      << "cycles/s" << std::setw(10) << "speedup" << "\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(22) << r.Label() << std::right << std::fixed
        << std::setprecision(2) << std::setw(18) << r.throughput << std::setw(9)
        << r.speedup << "x\n";
  }
  return out.str();
}

}  // namespace hwfuzz

#endif  // HWFUZZ_BENCH_HPP_
