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

// Stage timing and throughput accounting.
//
// Throughput is input clock cycles simulated per wall-clock second. Stage
// shares split the attributed time between input generation (mutation),
// simulation and the coverage/corpus update.

#ifndef HWFUZZ_STATS_HPP_
#define HWFUZZ_STATS_HPP_

#include <array>
#include <chrono>
#include <cstdint>

#include "hwfuzz/error.hpp"

namespace hwfuzz {

enum class Stage : uint8_t { kMutation = 0, kSimulation = 1, kCoverageCorpus = 2 };
inline constexpr size_t kNumStages = 3;

inline const char* StageName(Stage s) {
  switch (s) {
    case Stage::kMutation: return "mutation";
    case Stage::kSimulation: return "simulation";
    case Stage::kCoverageCorpus: return "coverage_corpus";
  }
  return "unknown";
}

using Clock = std::chrono::steady_clock;
using Seconds = std::chrono::duration<double>;

struct StageShares {
  double mutation = 0.0;
  double simulation = 0.0;
  double coverage_corpus = 0.0;

  double sum() const { return mutation + simulation + coverage_corpus; }
};

class StageTimer {
 public:
  void Record(Stage stage, Seconds duration) {
    if (duration.count() < 0) throw ContractViolation("negative stage duration");
    seconds_[static_cast<size_t>(stage)] += duration.count();
  }
  void AddCycles(uint64_t cycles) { cycles_ += cycles; }
  void AddIteration() { ++iterations_; }
  void Merge(const StageTimer& other) {
    for (size_t i = 0; i < kNumStages; ++i) seconds_[i] += other.seconds_[i];
    cycles_ += other.cycles_;
    iterations_ += other.iterations_;
  }

  double seconds(Stage s) const { return seconds_[static_cast<size_t>(s)]; }
  double attributed_seconds() const { return seconds_[0] + seconds_[1] + seconds_[2]; }
  uint64_t cycles() const { return cycles_; }
  uint64_t iterations() const { return iterations_; }

  // Fractions of the attributed time; they sum to 1.
  StageShares Shares() const {
    const double total = attributed_seconds();
    if (total <= 0) return {};
    return {seconds_[0] / total, seconds_[1] / total, seconds_[2] / total};
  }

  // Fractions of wall time. With overlapped stages the sum can exceed 1.
  StageShares Utilization(double wall_seconds) const {
    if (!(wall_seconds > 0)) throw ContractViolation("utilization needs wall time > 0");
    return {seconds_[0] / wall_seconds, seconds_[1] / wall_seconds,
            seconds_[2] / wall_seconds};
  }

 private:
  std::array<double, kNumStages> seconds_{};
  uint64_t cycles_ = 0;
  uint64_t iterations_ = 0;
};

inline double Throughput(uint64_t cycles, double wall_seconds) {
  if (!(wall_seconds > 0)) {
    throw ContractViolation("throughput undefined for zero elapsed time");
  }
  return static_cast<double>(cycles) / wall_seconds;
}

inline double Throughput(const StageTimer& timer, double wall_seconds) {
  return Throughput(timer.cycles(), wall_seconds);
}

// Charges the enclosing scope to one stage.
class ScopedStage {
 public:
  ScopedStage(StageTimer& timer, Stage stage)
      : timer_(timer), stage_(stage), start_(Clock::now()) {}
  ~ScopedStage() { timer_.Record(stage_, Clock::now() - start_); }

  ScopedStage(const ScopedStage&) = delete;
  ScopedStage& operator=(const ScopedStage&) = delete;

 private:
  StageTimer& timer_;
  Stage stage_;
  Clock::time_point start_;
};

}  // namespace hwfuzz

#endif  // HWFUZZ_STATS_HPP_
