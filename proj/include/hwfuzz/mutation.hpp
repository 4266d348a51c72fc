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

// The mutation engine: havoc and splice only.

#ifndef HWFUZZ_MUTATION_HPP_
#define HWFUZZ_MUTATION_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hwfuzz/corpus.hpp"
#include "hwfuzz/error.hpp"
#include "hwfuzz/rng.hpp"

namespace hwfuzz {

struct HavocParams {
  // Stacked edits per call: 2^k with k uniform in [0, max_stack_exp].
  unsigned max_stack_exp = 6;
  bool flip_bit = true;
  bool random_byte = true;
  bool add_sub = true;

  void Validate() const {
    if (!flip_bit && !random_byte && !add_sub) {
      throw ContractViolation("havoc needs at least one edit kind enabled");
    }
    if (max_stack_exp > 20) {
      throw ContractViolation("max_stack_exp too large: " +
                              std::to_string(max_stack_exp));
    }
  }
};

inline constexpr uint8_t kMaxArith = 35;

// Value-only edits; the output has the same length as the input.
inline std::vector<uint8_t> Havoc(std::span<const uint8_t> bytes,
                                  const HavocParams& params, Rng& rng) {
  std::vector<uint8_t> out(bytes.begin(), bytes.end());
  if (out.empty()) return out;

  enum Kind { kFlip, kRandom, kArith };
  Kind kinds[3];
  size_t num_kinds = 0;
  if (params.flip_bit) kinds[num_kinds++] = kFlip;
  if (params.random_byte) kinds[num_kinds++] = kRandom;
  if (params.add_sub) kinds[num_kinds++] = kArith;
  if (num_kinds == 0) throw ContractViolation("havoc: no edit kinds enabled");

  const uint64_t edits = uint64_t{1} << rng.Below(params.max_stack_exp + 1);
  for (uint64_t e = 0; e < edits; ++e) {
    const size_t pos = rng.Below(out.size());
    switch (kinds[rng.Below(num_kinds)]) {
      case kFlip:
        out[pos] ^= static_cast<uint8_t>(1u << rng.Below(8));
        break;
      case kRandom:
        // XOR with a nonzero value so the byte always changes.
        out[pos] ^= static_cast<uint8_t>(1 + rng.Below(255));
        break;
      case kArith: {
        const auto delta = static_cast<uint8_t>(1 + rng.Below(kMaxArith));
        out[pos] = rng.Below(2) ? static_cast<uint8_t>(out[pos] + delta)
                                : static_cast<uint8_t>(out[pos] - delta);
        break;
      }
    }
  }
  return out;
}

// a[0..i) ++ b[j..) with i uniform in [0, |a|] and j uniform in [0, |b|].
inline std::vector<uint8_t> SpliceAt(std::span<const uint8_t> a,
                                     std::span<const uint8_t> b, size_t i,
                                     size_t j, size_t max_bytes) {
  i = std::min(i, a.size());
  j = std::min(j, b.size());
  std::vector<uint8_t> out;
  out.reserve(i + (b.size() - j));
  out.insert(out.end(), a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i));
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
  if (out.size() > max_bytes) out.resize(max_bytes);
  return out;
}

inline std::vector<uint8_t> Splice(std::span<const uint8_t> a,
                                   std::span<const uint8_t> b, Rng& rng,
                                   size_t max_bytes = SIZE_MAX) {
  const size_t i = rng.Below(a.size() + 1);
  const size_t j = rng.Below(b.size() + 1);
  return SpliceAt(a, b, i, j, max_bytes);
}

enum class InputStrategy {
  kGuided,
  // Fresh random bytes, lengths drawn from the initial seeds. The baseline
  // that guided mutation is measured against.
  kRandom,
};

struct MutationParams {
  HavocParams havoc;
  double p_splice = 0.25;
  size_t max_chromosome_bytes = 1024;
  InputStrategy strategy = InputStrategy::kGuided;

  void Validate() const {
    havoc.Validate();
    if (!(p_splice >= 0.0 && p_splice <= 1.0)) {
      throw ContractViolation("p_splice must lie in [0, 1]");
    }
    if (max_chromosome_bytes == 0) {
      throw ContractViolation("max_chromosome_bytes must be >= 1");
    }
  }
};

// Produces each iteration's batch of inputs (getInputs). Initial seeds come
// out first, unmutated and in manifest order; after that every slot is a
// havoc or splice child of fitness-selected seeds.
class InputGenerator {
 public:
  InputGenerator(MutationParams params, uint64_t master_seed,
                 std::vector<Chromosome> initial_seeds)
      : params_(std::move(params)),
        master_seed_(master_seed),
        initial_(std::move(initial_seeds)) {
    params_.Validate();
    for (const auto& c : initial_) next_id_ = std::max(next_id_, c.id + 1);
  }

  std::vector<Chromosome> GetInputs(const Corpus& corpus, size_t n,
                                    uint64_t iteration) {
    if (n == 0) throw ContractViolation("get_inputs: n must be >= 1");
    if (corpus.empty()) throw ContractViolation("get_inputs: empty corpus");
    std::vector<Chromosome> out;
    out.reserve(n);
    for (size_t slot = 0; slot < n; ++slot) {
      if (initial_cursor_ < initial_.size()) {
        out.push_back(initial_[initial_cursor_++]);
        continue;
      }
      Rng rng = Rng::ForSlot(master_seed_, iteration, slot);
      out.push_back(Generate(corpus, rng));
    }
    return out;
  }

  // Ids handed out so far are all < next_id().
  uint64_t next_id() const { return next_id_; }
  bool initial_pass_done() const { return initial_cursor_ >= initial_.size(); }
  const MutationParams& params() const { return params_; }

 private:
  Chromosome Generate(const Corpus& corpus, Rng& rng) {
    Chromosome child;
    child.id = next_id_++;
    if (params_.strategy == InputStrategy::kRandom) {
      const Chromosome& shape = initial_[rng.Below(initial_.size())];
      child.origin = Origin::kRandom;
      child.bytes.resize(std::min(shape.bytes.size(), params_.max_chromosome_bytes));
      for (auto& b : child.bytes) b = rng.Byte();
      return child;
    }
    const Seed& first = corpus.Select(rng);
    if (params_.p_splice > 0.0 && rng.Chance(params_.p_splice)) {
      const Seed& second = corpus.Select(rng);
      child.origin = Origin::kSplice;
      child.parents = {first.chromosome.id, second.chromosome.id};
      child.bytes = Splice(first.chromosome.bytes, second.chromosome.bytes, rng,
                           params_.max_chromosome_bytes);
    } else {
      child.origin = Origin::kHavoc;
      child.parents = {first.chromosome.id};
      child.bytes = Havoc(first.chromosome.bytes, params_.havoc, rng);
      if (child.bytes.size() > params_.max_chromosome_bytes) {
        child.bytes.resize(params_.max_chromosome_bytes);
      }
    }
    return child;
  }

  MutationParams params_;
  uint64_t master_seed_;
  std::vector<Chromosome> initial_;
  size_t initial_cursor_ = 0;
  uint64_t next_id_ = 0;
};

}  // namespace hwfuzz

#endif  // HWFUZZ_MUTATION_HPP_
