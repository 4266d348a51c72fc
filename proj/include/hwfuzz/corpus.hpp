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

// Seed pool, fitness and the per-iteration corpus update.
//
// A seed's base fitness is the coverage rate its own run achieved. A seed
// that is the only member of the pool to hit some coverpoint has its fitness
// multiplied by the favor factor. Selection is fitness-proportional.

#ifndef HWFUZZ_CORPUS_HPP_
#define HWFUZZ_CORPUS_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hwfuzz/coverage.hpp"
#include "hwfuzz/error.hpp"
#include "hwfuzz/rng.hpp"

namespace hwfuzz {

enum class Origin : uint8_t { kInitialSeed, kHavoc, kSplice, kRandom };

inline const char* OriginName(Origin o) {
  switch (o) {
    case Origin::kInitialSeed: return "initial-seed";
    case Origin::kHavoc: return "havoc";
    case Origin::kSplice: return "splice";
    case Origin::kRandom: return "random";
  }
  return "unknown";
}

struct Chromosome {
  std::vector<uint8_t> bytes;
  Origin origin = Origin::kInitialSeed;
  uint64_t id = 0;
  // Seeds this chromosome was derived from; empty for initial seeds.
  std::vector<uint64_t> parents;

  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

struct FitnessParams {
  double favor = 4.0;
  double epsilon_fitness = 1e-6;

  void Validate() const {
    if (!(favor > 1.0)) {
      throw ContractViolation("favor must be > 1, got " + std::to_string(favor));
    }
    if (!(epsilon_fitness > 0.0)) {
      throw ContractViolation("epsilon_fitness must be > 0");
    }
  }
};

inline double ComputeFitness(const CoverageVector& seed_run,
                             bool uniquely_covers,
                             const FitnessParams& params) {
  const double rate = std::max(seed_run.CoveredFraction(), params.epsilon_fitness);
  return uniquely_covers ? rate * params.favor : rate;
}

struct Seed {
  Chromosome chromosome;
  CoverageVector run_coverage;
  double base_fitness = 0.0;
  double effective_fitness = 0.0;
  // Coverpoints for which this is the only covering seed.
  size_t unique_points = 0;
  // Initial seeds sit in the pool before their first run.
  bool executed = false;
  uint64_t birth_iteration = 0;

  bool uniquely_covers() const { return unique_points > 0; }
};

struct UpdateSummary {
  size_t retained = 0;
  size_t new_points = 0;
  std::vector<uint64_t> retained_ids;
  // One report per input, in batch order.
  std::vector<NewCoverageReport> reports;
};

class Corpus {
 public:
  static constexpr size_t kDefaultMaxSeeds = 100000;

  Corpus(size_t coverpoints, FitnessParams params,
         size_t max_seeds = kDefaultMaxSeeds)
      : params_(params),
        max_seeds_(max_seeds),
        cumulative_(coverpoints),
        owner_(coverpoints, kNoOwner) {
    if (coverpoints == 0) {
      throw ContractViolation("corpus needs a DUT with at least 1 coverpoint");
    }
    params_.Validate();
  }

  // Initial seeds are always retained, before they have been run. Their
  // coverage is attached by the first UpdateSeedCorpus that executes them.
  void AddInitialSeeds(std::span<const Chromosome> seeds) {
    for (const auto& c : seeds) {
      CheckCapacity();
      Seed s;
      s.chromosome = c;
      s.chromosome.origin = Origin::kInitialSeed;
      s.run_coverage = CoverageVector(cumulative_.size());
      pending_initial_[c.id] = seeds_.size();
      seeds_.push_back(std::move(s));
      Refresh(seeds_.size() - 1);
    }
    RebuildWheel();
  }

  UpdateSummary UpdateSeedCorpus(std::span<const Chromosome> inputs,
                                 std::span<const CoverageVector> runs,
                                 uint64_t iteration = 0) {
    if (inputs.size() != runs.size()) {
      throw ContractViolation("update_seed_corpus: " +
                              std::to_string(inputs.size()) + " inputs but " +
                              std::to_string(runs.size()) + " coverage vectors");
    }
    for (const auto& run : runs) CheckSameLength(cumulative_.size(), run.size());

    UpdateSummary summary;
    summary.reports.reserve(runs.size());
    bool changed = false;
    for (size_t j = 0; j < inputs.size(); ++j) {
      NewCoverageReport report = cumulative_.Observe(runs[j]);
      summary.new_points += report.size();
      if (!frozen_) {
        auto pending = pending_initial_.find(inputs[j].id);
        if (pending != pending_initial_.end() &&
            inputs[j].origin == Origin::kInitialSeed) {
          const size_t idx = pending->second;
          pending_initial_.erase(pending);
          seeds_[idx].run_coverage = runs[j];
          seeds_[idx].executed = true;
          seeds_[idx].birth_iteration = iteration;
          AddContribution(idx);
          changed = true;
        } else if (!report.empty()) {
          CheckCapacity();
          Seed s;
          s.chromosome = inputs[j];
          s.run_coverage = runs[j];
          s.executed = true;
          s.birth_iteration = iteration;
          seeds_.push_back(std::move(s));
          AddContribution(seeds_.size() - 1);
          summary.retained_ids.push_back(inputs[j].id);
          ++summary.retained;
          changed = true;
        }
      }
      summary.reports.push_back(std::move(report));
    }
    if (summary.new_points > 0) {
      stagnation_counter_ = 0;
    } else {
      ++stagnation_counter_;
    }
    if (changed) RebuildWheel();
    return summary;
  }

  // Fitness-proportional choice.
  const Seed& Select(Rng& rng) const {
    if (seeds_.empty()) throw ContractViolation("select from an empty corpus");
    const double r = rng.Unit() * wheel_.back();
    auto it = std::upper_bound(wheel_.begin(), wheel_.end(), r);
    size_t idx = static_cast<size_t>(it - wheel_.begin());
    return seeds_[std::min(idx, seeds_.size() - 1)];
  }

  double SelectionProbability(size_t index) const {
    return seeds_[index].effective_fitness / wheel_.back();
  }

  // With a frozen corpus runs still feed the cumulative coverage, but no seed
  // is added or changed. Used to isolate input-stream behavior in tests.
  void set_frozen(bool frozen) { frozen_ = frozen; }
  bool frozen() const { return frozen_; }

  bool empty() const { return seeds_.empty(); }
  size_t size() const { return seeds_.size(); }
  const Seed& seed(size_t i) const { return seeds_[i]; }
  std::span<const Seed> seeds() const { return seeds_; }
  const CumulativeCoverage& cumulative() const { return cumulative_; }
  const FitnessParams& params() const { return params_; }
  size_t coverpoints() const { return cumulative_.size(); }
  uint64_t stagnation_counter() const { return stagnation_counter_; }
  size_t pending_initial() const { return pending_initial_.size(); }

  std::vector<Chromosome> Chromosomes() const {
    std::vector<Chromosome> out;
    out.reserve(seeds_.size());
    for (const auto& s : seeds_) out.push_back(s.chromosome);
    return out;
  }

 private:
  static constexpr size_t kNoOwner = std::numeric_limits<size_t>::max();

  void CheckCapacity() const {
    if (seeds_.size() >= max_seeds_) {
      throw CorpusError("corpus size limit of " + std::to_string(max_seeds_) +
                        " seeds reached; raise max_corpus_size");
    }
  }

  void AddContribution(size_t idx) {
    Seed& s = seeds_[idx];
    cumulative_.AddCoveringSeed(s.run_coverage);
    const auto counts = cumulative_.covering_seed_counts();
    for (size_t p = 0; p < s.run_coverage.hits.size(); ++p) {
      if (s.run_coverage.hits[p] == 0) continue;
      if (counts[p] == 1) {
        owner_[p] = idx;
        ++s.unique_points;
      } else if (counts[p] == 2) {
        const size_t prev = owner_[p];
        owner_[p] = kNoOwner;
        --seeds_[prev].unique_points;
        Refresh(prev);
      }
    }
    Refresh(idx);
  }

  void Refresh(size_t idx) {
    Seed& s = seeds_[idx];
    s.base_fitness = s.run_coverage.CoveredFraction();
    s.effective_fitness = ComputeFitness(s.run_coverage, s.uniquely_covers(), params_);
  }

  void RebuildWheel() {
    wheel_.resize(seeds_.size());
    double total = 0.0;
    for (size_t i = 0; i < seeds_.size(); ++i) {
      total += seeds_[i].effective_fitness;
      wheel_[i] = total;
    }
  }

  FitnessParams params_;
  size_t max_seeds_;
  CumulativeCoverage cumulative_;
  std::vector<Seed> seeds_;
  // Running prefix sums of effective fitness.
  std::vector<double> wheel_;
  // Sole covering seed per coverpoint, if any.
  std::vector<size_t> owner_;
  std::unordered_map<uint64_t, size_t> pending_initial_;
  uint64_t stagnation_counter_ = 0;
  bool frozen_ = false;
};

}  // namespace hwfuzz

#endif  // HWFUZZ_CORPUS_HPP_
