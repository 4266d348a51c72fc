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

// Regenerates checked-in fixtures:
//   hwfuzz_fixtures seeds <dir>    bundled seed corpora, one subdirectory per DUT
//   hwfuzz_fixtures golden <file>  coverage of the periph-fsm known-good seed

#include <fstream>
#include <iostream>
#include <string>

#include "hwfuzz/corpus_io.hpp"
#include "hwfuzz/duts/registry.hpp"
#include "hwfuzz/duts/witness.hpp"
#include "hwfuzz/simulate.hpp"

using namespace hwfuzz;

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: hwfuzz_fixtures seeds <dir> | golden <file>\n";
    return 2;
  }
  const std::string what = argv[1];
  const std::filesystem::path target = argv[2];
  if (what == "seeds") {
    for (const auto& name : duts::BundledNames()) {
      std::vector<Chromosome> seeds;
      for (const auto& bytes : duts::BundledSeeds(name)) {
        Chromosome c;
        c.id = seeds.size();
        c.bytes = bytes;
        seeds.push_back(std::move(c));
      }
      SaveCorpus(seeds, target / name);
      std::cout << name << ": " << seeds.size() << " seeds\n";
    }
    return 0;
  }
  if (what == "golden") {
    duts::PeriphFsm dut;
    const DutDescriptor& d = dut.descriptor();
    const Stimulus s = Translate(duts::PeriphFsmKnownGood(), d.input_width_bits, d.grammar);
    const RunOutcome o = RunStimulus(dut, s, nullptr);
    std::ofstream out(target);
    out << "# periph-fsm known-good seed coverage: index\thits\n";
    for (size_t i = 0; i < o.coverage.hits.size(); ++i) {
      out << i << '\t' << o.coverage.hits[i] << '\n';
    }
    std::cout << "wrote " << target.string() << " (" << o.coverage.CoveredCount()
              << " covered)\n";
    return out ? 0 : 1;
  }
  std::cerr << "unknown fixture '" << what << "'\n";
  return 2;
}
