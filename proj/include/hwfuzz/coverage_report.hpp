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

// Report-file coverage collection, the slow path the direct readout replaces.
//
// The writer emits a coverage database in the style of a simulator's
// coverage.dat: one record per coverpoint with \001/\002-delimited key/value
// attributes and the hit count, in an order unrelated to the vector index.
// The collector writes that file after every run and parses it back.

#ifndef HWFUZZ_COVERAGE_REPORT_HPP_
#define HWFUZZ_COVERAGE_REPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hwfuzz/coverage.hpp"
#include "hwfuzz/error.hpp"

namespace hwfuzz {

inline void WriteCoverageDatabase(const std::string& design,
                                  std::span<const std::string> names,
                                  std::span<const uint32_t> counts,
                                  std::ostream& out) {
  if (names.size() != counts.size()) {
    throw ContractViolation("coverage database: " + std::to_string(names.size()) +
                            " names for " + std::to_string(counts.size()) +
                            " counters");
  }
  // Records come out grouped by name hash, not by vector index.
  std::vector<size_t> order(names.size());
  std::iota(order.begin(), order.end(), 0);
  std::hash<std::string> hasher;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const size_t ha = hasher(names[a]), hb = hasher(names[b]);
    return ha != hb ? ha < hb : a < b;
  });
  out << "# SystemC::Coverage-3\n";
  for (size_t i : order) {
    out << "C '\001t\002branch\001page\002v_branch/" << design << "\001f\002"
        << design << ".sv\001l\002" << (100 + 3 * i) << "\001n\002" << (i % 4)
        << "\001o\002" << names[i] << "\001h\002TOP." << design << "\001' "
        << counts[i] << "\n";
  }
}

// Maps each record back to its vector slot through the coverpoint name.
inline CoverageVector ParseCoverageDatabase(
    std::istream& in, const std::unordered_map<std::string, size_t>& index) {
  CoverageVector cov(index.size());
  std::string line;
  size_t records = 0;
  while (std::getline(in, line)) {
    if (!line.starts_with("C '")) continue;
    const size_t close = line.rfind('\'');
    if (close == std::string::npos || close < 3) {
      throw DutError("coverage database: unterminated record");
    }
    const std::string_view attrs(line.data() + 3, close - 3);
    std::string_view name;
    size_t pos = 0;
    while (pos < attrs.size()) {
      size_t next = attrs.find('\001', pos);
      if (next == std::string_view::npos) next = attrs.size();
      const std::string_view kv = attrs.substr(pos, next - pos);
      const size_t sep = kv.find('\002');
      if (sep != std::string_view::npos && kv.substr(0, sep) == "o") {
        name = kv.substr(sep + 1);
      }
      pos = next + 1;
    }
    auto it = index.find(std::string(name));
    if (it == index.end()) {
      throw DutError("coverage database: unknown coverpoint '" +
                     std::string(name) + "'");
    }
    cov.hits[it->second] =
        static_cast<uint32_t>(std::stoul(line.substr(close + 1)));
    ++records;
  }
  if (records != index.size()) {
    throw DutError("coverage database: " + std::to_string(records) +
                   " records for " + std::to_string(index.size()) +
                   " coverpoints");
  }
  return cov;
}

// Writes the database to a scratch file and parses it back, once per run.
class ReportFileCollector {
 public:
  ReportFileCollector(std::filesystem::path scratch_file,
                      std::span<const std::string> names)
      : path_(std::move(scratch_file)) {
    for (size_t i = 0; i < names.size(); ++i) index_.emplace(names[i], i);
  }

  ~ReportFileCollector() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }

  ReportFileCollector(const ReportFileCollector&) = delete;
  ReportFileCollector& operator=(const ReportFileCollector&) = delete;

  template <typename WriteFn>
  CoverageVector Collect(WriteFn&& write) {
    {
      std::ofstream out(path_, std::ios::trunc);
      write(out);
      if (!out) throw DutError("cannot write coverage report " + path_.string());
    }
    std::ifstream in(path_);
    if (!in) throw DutError("cannot read coverage report " + path_.string());
    return ParseCoverageDatabase(in, index_);
  }

 private:
  std::filesystem::path path_;
  std::unordered_map<std::string, size_t> index_;
};

}  // namespace hwfuzz

#endif  // HWFUZZ_COVERAGE_REPORT_HPP_
