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

// One worker's simulation front end: translate, reset, step, read coverage.

#ifndef HWFUZZ_SIMULATE_HPP_
#define HWFUZZ_SIMULATE_HPP_

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>

#include "hwfuzz/corpus.hpp"
#include "hwfuzz/coverage.hpp"
#include "hwfuzz/coverage_report.hpp"
#include "hwfuzz/dut.hpp"
#include "hwfuzz/grammar.hpp"

namespace hwfuzz {

enum class CoverageCollection {
  // Copy the counters out of the model (the sketched interface).
  kDirect,
  // Dump a coverage database file and parse it back after every run.
  kReportFile,
};

struct RunOutcome {
  CoverageVector coverage;
  CheckResult check;
  uint64_t cycles = 0;
  // Time spent obtaining `coverage` after the last cycle.
  double coverage_seconds = 0.0;
};

// reset, step every cycle in order, read coverage once, evaluate the check.
inline RunOutcome RunStimulus(Dut& dut, const Stimulus& stimulus,
                              ReportFileCollector* report_collector = nullptr) {
  const DutDescriptor& desc = dut.descriptor();
  if (stimulus.width_bits != desc.input_width_bits) {
    throw ContractViolation("stimulus width " + std::to_string(stimulus.width_bits) +
                            " does not match DUT '" + desc.name + "' width " +
                            std::to_string(desc.input_width_bits));
  }
  RunOutcome out;
  dut.Reset();
  const size_t cycles = stimulus.cycles();
  for (size_t c = 0; c < cycles; ++c) dut.Step(stimulus.Cycle(c));
  out.cycles = cycles;

  const auto t0 = std::chrono::steady_clock::now();
  if (report_collector) {
    out.coverage = report_collector->Collect(
        [&](std::ostream& os) { dut.WriteCoverageReport(os); });
  } else {
    dut.ReadCoverage(out.coverage);
  }
  out.coverage_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CheckSameLength(desc.coverpoint_count, out.coverage.size());
  out.check = dut.Check();
  return out;
}

class Simulator {
 public:
  Simulator(std::unique_ptr<Dut> dut, CoverageCollection collection,
            const std::filesystem::path& scratch_file = {})
      : dut_(std::move(dut)) {
    dut_->descriptor().Validate();
    if (collection == CoverageCollection::kReportFile) {
      if (!dut_->HasCoverageReport()) {
        throw ConfigError("DUT '" + dut_->descriptor().name +
                          "' has no coverage report; use direct collection");
      }
      collector_ = std::make_unique<ReportFileCollector>(scratch_file,
                                                         dut_->CoverpointNames());
    }
  }

  RunOutcome Run(const Stimulus& stimulus) {
    return RunStimulus(*dut_, stimulus, collector_.get());
  }

  RunOutcome Run(const Chromosome& chromosome) {
    const DutDescriptor& desc = dut_->descriptor();
    return Run(Translate(chromosome.bytes, desc.input_width_bits, desc.grammar,
                         chromosome.id));
  }

  Dut& dut() { return *dut_; }
  const DutDescriptor& descriptor() const { return dut_->descriptor(); }

 private:
  std::unique_ptr<Dut> dut_;
  std::unique_ptr<ReportFileCollector> collector_;
};

}  // namespace hwfuzz

#endif  // HWFUZZ_SIMULATE_HPP_
