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

// The simulation-platform contract.
//
// One Dut instance belongs to one worker thread. A run is reset, one Step per
// stimulus cycle, then a single coverage readout. The readout is the direct
// counter copy; bundled DUTs can also dump a textual coverage database, which
// is what a conventional simulator flow would parse after every run.

#ifndef HWFUZZ_DUT_HPP_
#define HWFUZZ_DUT_HPP_

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hwfuzz/coverage.hpp"
#include "hwfuzz/error.hpp"
#include "hwfuzz/grammar.hpp"

namespace hwfuzz {

struct DutDescriptor {
  std::string name;
  size_t input_width_bits = 1;
  size_t coverpoint_count = 1;
  GrammarMode grammar;
  // Busy-wait per simulated cycle, microseconds (synth-delay only).
  uint32_t cycle_delay_us = 0;

  void Validate() const {
    if (input_width_bits == 0) {
      throw ContractViolation("DUT '" + name + "' declares input width 0");
    }
    if (coverpoint_count == 0) {
      throw ContractViolation("DUT '" + name + "' declares 0 coverpoints");
    }
    grammar.Validate();
  }
};

struct CheckResult {
  bool passed = true;
  std::string message;
};

class Dut {
 public:
  virtual ~Dut() = default;

  virtual const DutDescriptor& descriptor() const = 0;
  virtual void Reset() = 0;
  // `input` is one cycle, ceil(width/8) bytes, little-endian.
  virtual void Step(std::span<const uint8_t> input) = 0;
  virtual void ReadCoverage(CoverageVector& out) = 0;
  virtual CheckResult Check() = 0;

  // Textual coverage database for the report-file collection path. Only
  // in-process models provide one.
  virtual bool HasCoverageReport() const { return false; }
  virtual void WriteCoverageReport(std::ostream& out) const {
    (void)out;
    throw ContractViolation("DUT '" + descriptor().name +
                            "' cannot write a coverage report");
  }
  virtual std::span<const std::string> CoverpointNames() const { return {}; }
};

using DutFactory = std::function<std::unique_ptr<Dut>()>;

// Base for the bundled software models: a flat array of named counters.
class InstrumentedDut : public Dut {
 public:
  explicit InstrumentedDut(DutDescriptor desc)
      : desc_(std::move(desc)), counters_(desc_.coverpoint_count, 0) {}

  const DutDescriptor& descriptor() const override { return desc_; }

  void Reset() override {
    std::fill(counters_.begin(), counters_.end(), 0);
    bug_ = false;
    bug_message_.clear();
    ResetState();
  }

  void ReadCoverage(CoverageVector& out) override { out.hits = counters_; }

  CheckResult Check() override {
    return bug_ ? CheckResult{false, bug_message_} : CheckResult{};
  }

  bool HasCoverageReport() const override { return true; }
  void WriteCoverageReport(std::ostream& out) const override;
  std::span<const std::string> CoverpointNames() const override { return names_; }

 protected:
  virtual void ResetState() = 0;

  void Cover(size_t point) {
    if (counters_[point] != UINT32_MAX) ++counters_[point];
  }
  void CoverIf(bool cond, size_t point) {
    if (cond) Cover(point);
  }
  void Fail(std::string message) {
    if (!bug_) bug_message_ = std::move(message);
    bug_ = true;
  }

  // Subclasses name every coverpoint; names_.size() must equal the count.
  std::vector<std::string> names_;

 private:
  DutDescriptor desc_;
  std::vector<uint32_t> counters_;
  bool bug_ = false;
  std::string bug_message_;
};

inline void BusyWaitMicros(uint32_t micros) {
  if (micros == 0) return;
  const auto until =
      std::chrono::steady_clock::now() + std::chrono::microseconds(micros);
  while (std::chrono::steady_clock::now() < until) {
  }
}

}  // namespace hwfuzz

#include "hwfuzz/coverage_report.hpp"

namespace hwfuzz {

inline void InstrumentedDut::WriteCoverageReport(std::ostream& out) const {
  WriteCoverageDatabase(desc_.name, names_, counters_, out);
}

}  // namespace hwfuzz

#endif  // HWFUZZ_DUT_HPP_
