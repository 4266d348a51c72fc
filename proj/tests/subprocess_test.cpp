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

#include "hwfuzz/subprocess.hpp"

#include <gtest/gtest.h>

#include "hwfuzz/duts/registry.hpp"
#include "hwfuzz/simulate.hpp"

namespace hwfuzz {
namespace {

std::vector<std::string> ServeCommand(const std::string& dut) {
  return {HWFUZZ_CLI_PATH, "serve-dut", "--dut", dut};
}

TEST(WireTest, FramesCarryTagLengthAndBody) {
  const std::vector<uint8_t> body = {1, 2, 3};
  const auto f = wire::Frame(wire::kStep, body);
  EXPECT_EQ(f, (std::vector<uint8_t>{wire::kStep, 3, 0, 0, 0, 1, 2, 3}));
  std::vector<uint8_t> out;
  wire::PutU32(out, 0x01020304);
  EXPECT_EQ(out, (std::vector<uint8_t>{4, 3, 2, 1}));
  EXPECT_EQ(wire::GetU32(out.data()), 0x01020304u);
}

TEST(SubprocessDutTest, HelloReportsTheDescriptor) {
  for (const auto& name : duts::BundledNames()) {
    SubprocessDut dut(ServeCommand(name));
    const DutDescriptor expect = duts::BundledDescriptor(name);
    EXPECT_EQ(dut.descriptor().name, expect.name);
    EXPECT_EQ(dut.descriptor().input_width_bits, expect.input_width_bits);
    EXPECT_EQ(dut.descriptor().coverpoint_count, expect.coverpoint_count);
    EXPECT_EQ(dut.descriptor().grammar.kind, expect.grammar.kind);
    EXPECT_EQ(dut.descriptor().grammar.templates, expect.grammar.templates);
  }
}

// Loopback oracle: the same stimuli through the pipe and in process.
TEST(SubprocessDutTest, LoopbackMatchesInProcessCoverage) {
  for (const auto& name : duts::BundledNames()) {
    Simulator remote(std::make_unique<SubprocessDut>(ServeCommand(name)),
                     CoverageCollection::kDirect);
    Simulator local(duts::BundledFactory(name)(), CoverageCollection::kDirect);
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
      Chromosome c;
      c.bytes.resize(rng.Below(200));
      for (auto& b : c.bytes) b = rng.Byte();
      const RunOutcome r = remote.Run(c);
      const RunOutcome l = local.Run(c);
      ASSERT_EQ(r.coverage, l.coverage) << name << " stimulus " << i;
      ASSERT_EQ(r.check.passed, l.check.passed);
    }
  }
}

TEST(SubprocessDutTest, ReportsFailingChecks) {
  Simulator remote(std::make_unique<SubprocessDut>(ServeCommand("synth-delay")),
                   CoverageCollection::kDirect);
  Chromosome c;
  c.bytes = {0xde, 0xad};
  EXPECT_FALSE(remote.Run(c).check.passed);
}

TEST(SubprocessDutTest, ChildThatExitsIsANamedDutError) {
  try {
    SubprocessDut dut({"true"});
    FAIL() << "expected DutError";
  } catch (const DutError& e) {
    EXPECT_NE(std::string(e.what()).find("broken pipe"), std::string::npos) << e.what();
  }
}

TEST(SubprocessDutTest, SilentChildTimesOut) {
  try {
    SubprocessDut dut({"sleep", "5"}, 200);
    FAIL() << "expected DutError";
  } catch (const DutError& e) {
    EXPECT_NE(std::string(e.what()).find("timed out"), std::string::npos) << e.what();
  }
}

TEST(SubprocessDutTest, MissingProgramIsADutError) {
  EXPECT_THROW(SubprocessDut({"/nonexistent/simulator"}), DutError);
  EXPECT_THROW(SubprocessDut({}), ConfigError);
}

TEST(SubprocessDutTest, SplitCommandOnWhitespace) {
  EXPECT_EQ(SplitCommand("  sim  --flag  x "), (std::vector<std::string>{"sim", "--flag", "x"}));
}

}  // namespace
}  // namespace hwfuzz
