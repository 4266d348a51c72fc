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

// On-disk corpus format:
//   <dir>/seed-<id>.bin   raw chromosome bytes, nothing else
//   <dir>/manifest.txt    one "<id>\t<byte-length>" line per seed
// Coverage is never stored; it is derived by re-running the seeds.

#ifndef HWFUZZ_CORPUS_IO_HPP_
#define HWFUZZ_CORPUS_IO_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "hwfuzz/corpus.hpp"
#include "hwfuzz/error.hpp"

namespace hwfuzz {

namespace fs = std::filesystem;

inline std::string SeedFileName(uint64_t id) {
  return "seed-" + std::to_string(id) + ".bin";
}

inline std::vector<uint8_t> ReadFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void WriteFileBytes(const fs::path& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CorpusError("cannot write " + path.string());
}

// Replaces any corpus already in `dir`. Returns the number of seeds written.
inline size_t SaveCorpus(std::span<const Chromosome> chromosomes,
                         const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CorpusError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.starts_with("seed-") && name.ends_with(".bin")) fs::remove(entry.path());
  }
  std::ostringstream manifest;
  for (const auto& c : chromosomes) {
    WriteFileBytes(dir / SeedFileName(c.id), c.bytes);
    manifest << c.id << '\t' << c.bytes.size() << '\n';
  }
  const std::string text = manifest.str();
  WriteFileBytes(dir / "manifest.txt",
                 {reinterpret_cast<const uint8_t*>(text.data()), text.size()});
  return chromosomes.size();
}

inline size_t SaveCorpus(const Corpus& corpus, const fs::path& dir) {
  const auto chromosomes = corpus.Chromosomes();
  return SaveCorpus(chromosomes, dir);
}

struct LoadedCorpus {
  // In manifest order.
  std::vector<Chromosome> chromosomes;
  std::vector<std::string> warnings;
};

// Reads a corpus directory. Without a manifest, every seed-<id>.bin is loaded
// in id order. Oversized chromosomes are skipped with a warning.
inline LoadedCorpus LoadCorpus(const fs::path& dir, size_t max_chromosome_bytes) {
  if (!fs::is_directory(dir)) {
    throw CorpusError("seed directory " + dir.string() + " does not exist");
  }
  std::vector<std::pair<uint64_t, size_t>> entries;  // id, expected length
  bool have_lengths = false;
  const fs::path manifest = dir / "manifest.txt";
  if (fs::exists(manifest)) {
    have_lengths = true;
    std::ifstream in(manifest);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::istringstream fields(line);
      uint64_t id = 0;
      size_t length = 0;
      std::string extra;
      if (!(fields >> id >> length) || (fields >> extra)) {
        throw CorpusError("corrupt manifest " + manifest.string() + " line " +
                          std::to_string(line_no) + ": '" + line + "'");
      }
      entries.emplace_back(id, length);
    }
  } else {
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (!name.starts_with("seed-") || !name.ends_with(".bin")) continue;
      const std::string digits = name.substr(5, name.size() - 9);
      if (digits.empty() ||
          !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
        throw CorpusError("unrecognized seed file name " + entry.path().string());
      }
      entries.emplace_back(std::stoull(digits), 0);
    }
    std::sort(entries.begin(), entries.end());
  }
  if (entries.empty()) {
    throw CorpusError("no seeds found in " + dir.string());
  }

  LoadedCorpus result;
  for (const auto& [id, expected] : entries) {
    const fs::path path = dir / SeedFileName(id);
    if (!fs::exists(path)) {
      throw CorpusError("manifest lists missing seed file " + path.string());
    }
    const auto size = static_cast<size_t>(fs::file_size(path));
    if (have_lengths && size != expected) {
      throw CorpusError("corrupt seed file " + path.string() + ": manifest says " +
                        std::to_string(expected) + " bytes, file has " +
                        std::to_string(size));
    }
    if (size > max_chromosome_bytes) {
      result.warnings.push_back("skipped " + path.string() + ": " +
                                std::to_string(size) + " bytes exceeds limit of " +
                                std::to_string(max_chromosome_bytes));
      continue;
    }
    Chromosome c;
    c.id = id;
    c.origin = Origin::kInitialSeed;
    c.bytes = ReadFileBytes(path);
    result.chromosomes.push_back(std::move(c));
  }
  if (result.chromosomes.empty()) {
    throw CorpusError("no usable seeds found in " + dir.string());
  }
  return result;
}

// Full load: builds a corpus and regenerates coverage by running each seed.
inline Corpus LoadCorpusState(
    const fs::path& dir, size_t coverpoints, const FitnessParams& params,
    size_t max_chromosome_bytes,
    const std::function<CoverageVector(const Chromosome&)>& run,
    std::vector<std::string>* warnings = nullptr) {
  LoadedCorpus loaded = LoadCorpus(dir, max_chromosome_bytes);
  if (warnings) *warnings = loaded.warnings;
  Corpus corpus(coverpoints, params);
  corpus.AddInitialSeeds(loaded.chromosomes);
  std::vector<CoverageVector> runs;
  runs.reserve(loaded.chromosomes.size());
  for (const auto& c : loaded.chromosomes) runs.push_back(run(c));
  corpus.UpdateSeedCorpus(loaded.chromosomes, runs);
  return corpus;
}

}  // namespace hwfuzz

#endif  // HWFUZZ_CORPUS_IO_HPP_
