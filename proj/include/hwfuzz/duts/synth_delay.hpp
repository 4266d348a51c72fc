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

// synth-delay: a trivial byte-stream model with a configurable coverpoint
// count and a busy-wait per simulated cycle. It exists to measure executor
// throughput; the busy-wait stands in for the cost of a real simulator step.
//
// Coverpoints 0..N-3 record input byte classes (byte mod N-2); N-2 records a
// 0xDE byte and N-1 a 0xDE followed by a byte in 0xA0..0xAF.
// Planted bug: 0xDE immediately followed by 0xAD fails the check.

#ifndef HWFUZZ_DUTS_SYNTH_DELAY_HPP_
#define HWFUZZ_DUTS_SYNTH_DELAY_HPP_

#include <cstdint>
#include <span>
#include <string>

#include "hwfuzz/dut.hpp"

namespace hwfuzz::duts {

class SynthDelay final : public InstrumentedDut {
 public:
  static constexpr size_t kInputWidth = 8;
  static constexpr size_t kDefaultCoverpoints = 64;
  static constexpr size_t kMinCoverpoints = 3;

  static DutDescriptor Descriptor(size_t coverpoints = kDefaultCoverpoints,
                                  uint32_t delay_us = 0) {
    if (coverpoints < kMinCoverpoints) {
      throw ContractViolation("synth-delay needs at least 3 coverpoints, got " +
                              std::to_string(coverpoints));
    }
    return {"synth-delay", kInputWidth, coverpoints, GrammarMode::RawBits(), delay_us};
  }

  explicit SynthDelay(size_t coverpoints = kDefaultCoverpoints, uint32_t delay_us = 0)
      : InstrumentedDut(Descriptor(coverpoints, delay_us)),
        classes_(coverpoints - 2),
        delay_us_(delay_us) {
    for (size_t i = 0; i < classes_; ++i) names_.push_back("byte.class" + std::to_string(i));
    names_.push_back("magic.de");
    names_.push_back("magic.de_ax");
    Reset();
  }

  void Step(std::span<const uint8_t> in) override {
    BusyWaitMicros(delay_us_);
    const uint8_t b = in[0];
    Cover(b % classes_);
    if (prev_ == 0xde) {
      CoverIf((b & 0xf0) == 0xa0, classes_ + 1);
      if (b == 0xad) Fail("magic sequence 0xDE 0xAD reached");
    }
    CoverIf(b == 0xde, classes_);
    prev_ = b;
  }

 protected:
  void ResetState() override { prev_ = 0; }

 private:
  size_t classes_;
  uint32_t delay_us_;
  uint8_t prev_ = 0;
};

}  // namespace hwfuzz::duts

#endif  // HWFUZZ_DUTS_SYNTH_DELAY_HPP_
