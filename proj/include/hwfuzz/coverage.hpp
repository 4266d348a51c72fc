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

// The coverage feedback contract.
//
// A run reports a flat vector of per-coverpoint hit counts. Only identity by
// index matters: neither the order of coverpoints nor where they came from in
// the design is visible to the fuzzer. CumulativeCoverage accumulates those
// vectors over a campaign and decides which coverpoints a run hit first.

#ifndef HWFUZZ_COVERAGE_HPP_
#define HWFUZZ_COVERAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hwfuzz/error.hpp"

namespace hwfuzz {

struct CoverageVector {
  std::vector<uint32_t> hits;

  CoverageVector() = default;
  explicit CoverageVector(size_t coverpoints) : hits(coverpoints, 0) {}
  explicit CoverageVector(std::vector<uint32_t> h) : hits(std::move(h)) {}

  size_t size() const { return hits.size(); }

  size_t CoveredCount() const {
    size_t n = 0;
    for (uint32_t h : hits) n += (h != 0);
    return n;
  }

  // Fraction of coverpoints with a nonzero count; 0 for an empty vector.
  double CoveredFraction() const {
    return hits.empty() ? 0.0
                        : static_cast<double>(CoveredCount()) /
                              static_cast<double>(hits.size());
  }

  friend bool operator==(const CoverageVector&, const CoverageVector&) = default;
};

// Coverpoints whose cumulative total went from zero to positive.
struct NewCoverageReport {
  std::vector<size_t> new_points;

  bool empty() const { return new_points.empty(); }
  size_t size() const { return new_points.size(); }

  friend bool operator==(const NewCoverageReport&,
                         const NewCoverageReport&) = default;
};

inline void CheckSameLength(size_t expected, size_t actual) {
  if (expected != actual) {
    throw ContractViolation("coverage vector length mismatch: expected " +
                            std::to_string(expected) + " coverpoints, got " +
                            std::to_string(actual));
  }
}

class CumulativeCoverage {
 public:
  CumulativeCoverage() = default;
  explicit CumulativeCoverage(size_t coverpoints)
      : hit_totals_(coverpoints, 0), covering_seed_counts_(coverpoints, 0) {}

  size_t size() const { return hit_totals_.size(); }
  size_t covered_count() const { return covered_count_; }
  std::span<const uint64_t> hit_totals() const { return hit_totals_; }
  std::span<const uint32_t> covering_seed_counts() const {
    return covering_seed_counts_;
  }
  bool IsCovered(size_t point) const { return hit_totals_[point] != 0; }

  // Adds `run` into the totals (saturating) and returns the points this run
  // hit first. Seed bookkeeping is left to the corpus.
  NewCoverageReport Observe(const CoverageVector& run) {
    CheckSameLength(hit_totals_.size(), run.size());
    NewCoverageReport report;
    constexpr uint64_t kMax = std::numeric_limits<uint64_t>::max();
    for (size_t i = 0; i < run.hits.size(); ++i) {
      const uint32_t h = run.hits[i];
      if (h == 0) continue;
      if (hit_totals_[i] == 0) {
        report.new_points.push_back(i);
        ++covered_count_;
      }
      hit_totals_[i] = (kMax - hit_totals_[i] < h) ? kMax : hit_totals_[i] + h;
    }
    return report;
  }

  // Observe applied to each run in order; earlier runs take the credit.
  std::vector<NewCoverageReport> MergeBatch(
      std::span<const CoverageVector> runs) {
    for (const auto& run : runs) CheckSameLength(hit_totals_.size(), run.size());
    std::vector<NewCoverageReport> reports;
    reports.reserve(runs.size());
    for (const auto& run : runs) reports.push_back(Observe(run));
    return reports;
  }

  double CoverageRate() const {
    if (hit_totals_.empty()) {
      throw ContractViolation("coverage rate undefined: DUT declares 0 coverpoints");
    }
    return static_cast<double>(covered_count_) /
           static_cast<double>(hit_totals_.size());
  }

  // Called by the corpus when a seed whose run hit `run` joins the pool.
  void AddCoveringSeed(const CoverageVector& run) {
    CheckSameLength(covering_seed_counts_.size(), run.size());
    for (size_t i = 0; i < run.hits.size(); ++i) {
      if (run.hits[i] != 0) ++covering_seed_counts_[i];
    }
  }

 private:
  std::vector<uint64_t> hit_totals_;
  std::vector<uint32_t> covering_seed_counts_;
  size_t covered_count_ = 0;
};

// Text export used by the report command:
//   coverpoints=<N> covered=<M>
//   <index>\t<hit_total>\t<covering_seed_count>   (one per coverpoint)
struct CoverageSnapshot {
  std::vector<uint64_t> hit_totals;
  std::vector<uint32_t> covering_seed_counts;

  size_t covered_count() const {
    size_t n = 0;
    for (uint64_t h : hit_totals) n += (h != 0);
    return n;
  }
};

inline void WriteCoverageSnapshot(const CumulativeCoverage& cov,
                                  std::ostream& out) {
  out << "coverpoints=" << cov.size() << " covered=" << cov.covered_count()
      << "\n";
  for (size_t i = 0; i < cov.size(); ++i) {
    out << i << '\t' << cov.hit_totals()[i] << '\t'
        << cov.covering_seed_counts()[i] << "\n";
  }
}

inline CoverageSnapshot ReadCoverageSnapshot(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("coverage snapshot: empty");
  size_t n = 0, covered = 0;
  if (std::sscanf(header.c_str(), "coverpoints=%zu covered=%zu", &n,
                  &covered) != 2) {
    throw ConfigError("coverage snapshot: bad header '" + header + "'");
  }
  CoverageSnapshot snap;
  snap.hit_totals.resize(n);
  snap.covering_seed_counts.resize(n);
  std::string line;
  size_t seen = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    size_t index = 0;
    uint64_t total = 0;
    uint32_t seeds = 0;
    if (!(fields >> index >> total >> seeds) || index >= n) {
      throw ConfigError("coverage snapshot: bad line '" + line + "'");
    }
    snap.hit_totals[index] = total;
    snap.covering_seed_counts[index] = seeds;
    ++seen;
  }
  if (seen != n || snap.covered_count() != covered) {
    throw ConfigError("coverage snapshot: body does not match header");
  }
  return snap;
}

}  // namespace hwfuzz

#endif  // HWFUZZ_COVERAGE_HPP_
