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

#ifndef HWFUZZ_DUTS_REGISTRY_HPP_
#define HWFUZZ_DUTS_REGISTRY_HPP_

#include <memory>
#include <string>
#include <vector>

#include "hwfuzz/dut.hpp"
#include "hwfuzz/duts/periph_fsm.hpp"
#include "hwfuzz/duts/synth_delay.hpp"
#include "hwfuzz/duts/toy_cpu.hpp"

namespace hwfuzz::duts {

// Knobs that only synth-delay reads.
struct DutOptions {
  size_t coverpoints = SynthDelay::kDefaultCoverpoints;
  uint32_t delay_us = 0;
};

inline std::vector<std::string> BundledNames() {
  return {"periph-fsm", "toy-cpu", "synth-delay"};
}

inline bool IsBundled(const std::string& name) {
  for (const auto& n : BundledNames()) {
    if (n == name) return true;
  }
  return false;
}

inline DutDescriptor BundledDescriptor(const std::string& name,
                                       const DutOptions& opts = {}) {
  if (name == "periph-fsm") return PeriphFsm::Descriptor();
  if (name == "toy-cpu") return ToyCpu::Descriptor();
  if (name == "synth-delay") return SynthDelay::Descriptor(opts.coverpoints, opts.delay_us);
  throw ConfigError("unknown DUT '" + name + "' (try list-duts)");
}

inline DutFactory BundledFactory(const std::string& name, const DutOptions& opts = {}) {
  if (name == "periph-fsm") return [] { return std::make_unique<PeriphFsm>(); };
  if (name == "toy-cpu") return [] { return std::make_unique<ToyCpu>(); };
  if (name == "synth-delay") {
    return [opts] { return std::make_unique<SynthDelay>(opts.coverpoints, opts.delay_us); };
  }
  throw ConfigError("unknown DUT '" + name + "' (try list-duts)");
}

inline std::string BundledSummary(const std::string& name) {
  if (name == "periph-fsm") return "UART-style peripheral behind a register bus (raw-bits grammar)";
  if (name == "toy-cpu") return "streamed-instruction accumulator CPU with an unlock sequence (transaction grammar)";
  if (name == "synth-delay") return "byte-class model with a per-cycle busy-wait, for throughput benchmarks";
  return "";
}

}  // namespace hwfuzz::duts

#endif  // HWFUZZ_DUTS_REGISTRY_HPP_
