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

// Deterministic random streams.
//
// Every generated chromosome draws from its own sub-stream keyed by
// (master seed, iteration, slot). Results therefore do not depend on which
// thread produced them or in which order slots were filled.

#ifndef HWFUZZ_RNG_HPP_
#define HWFUZZ_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

namespace hwfuzz {

// SplitMix64 finalizer; used only to derive well-mixed engine seeds.
constexpr uint64_t MixBits(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(MixBits(seed)) {}

  // Sub-stream for one generated input. Distinct (iteration, slot) pairs
  // give unrelated streams for the same master seed.
  static Rng ForSlot(uint64_t master_seed, uint64_t iteration, uint64_t slot) {
    uint64_t key = MixBits(master_seed);
    key = MixBits(key ^ (iteration * 0xd1342543de82ef95ULL));
    key = MixBits(key ^ (slot + 0x632be59bd9b4e019ULL));
    return Rng(key);
  }

  // Derive an independent child stream, e.g. one per trial.
  Rng Split(uint64_t tag) { return Rng(Next() ^ MixBits(tag)); }

  uint64_t Next() { return engine_(); }

  // Uniform in [0, bound). Rejection sampling keeps the result identical
  // across standard library implementations (std distributions are not).
  uint64_t Below(uint64_t bound) {
    if (bound <= 1) return 0;
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

  // Uniform in [lo, hi], inclusive.
  uint64_t Between(uint64_t lo, uint64_t hi) { return lo + Below(hi - lo + 1); }

  // Uniform in [0, 1) with 53 bits of precision.
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool Chance(double p) { return Unit() < p; }

  uint8_t Byte() { return static_cast<uint8_t>(engine_() >> 56); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hwfuzz

#endif  // HWFUZZ_RNG_HPP_
