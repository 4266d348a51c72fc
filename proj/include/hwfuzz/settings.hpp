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

// Campaign settings: the key = value schema shared by config files and
// command-line flags. A flag --max-iters maps to key max_iters, and so on.

#ifndef HWFUZZ_SETTINGS_HPP_
#define HWFUZZ_SETTINGS_HPP_

#include <charconv>
#include <cstdint>
#include <string>
#include <vector>

#include "hwfuzz/config.hpp"
#include "hwfuzz/executor.hpp"

namespace hwfuzz {

struct SettingKey {
  const char* key;
  const char* help;
  bool boolean = false;
};

inline const std::vector<SettingKey>& CampaignKeys() {
  static const std::vector<SettingKey> keys = {
      {"dut", "bundled DUT name (see list-duts)"},
      {"dut_cmd", "external simulator command speaking the frame protocol"},
      {"templates", "transaction template table for a subprocess DUT"},
      {"seeds", "initial seed directory"},
      {"out", "output directory"},
      {"mode", "serial | batch | pipelined"},
      {"threads", "worker threads"},
      {"batch_size", "inputs per iteration (0 = threads)"},
      {"max_iters", "iteration budget"},
      {"stagnation", "stop after this many iterations without new coverage (0 = off)"},
      {"max_seconds", "wall-clock budget (0 = off)"},
      {"master_seed", "master random seed"},
      {"favor", "fitness multiplier for seeds that uniquely cover a point"},
      {"eps", "fitness floor"},
      {"p_splice", "probability of splice instead of havoc"},
      {"max_stack_exp", "havoc stacks 2^k edits, k uniform in [0, max_stack_exp]"},
      {"max_bytes", "chromosome length cap"},
      {"strategy", "guided | random"},
      {"collection", "direct | report-file"},
      {"max_corpus", "corpus capacity"},
      {"coverpoints", "synth-delay coverpoint count"},
      {"delay_us", "synth-delay busy-wait per cycle, microseconds"},
      {"timeout_ms", "subprocess DUT reply timeout"},
      {"max_findings", "finding files kept"},
      {"stop_on_finding", "stop at the first failing check", true},
  };
  return keys;
}

namespace detail {

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty()) {
    throw ConfigError("invalid value '" + value + "' for " + key);
  }
  return out;
}

inline double ParseReal(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid value '" + value + "' for " + key);
}

inline bool ParseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("invalid boolean '" + value + "' for " + key);
}

}  // namespace detail

// Fills `cfg` from `kv`. Keys outside `allowed` (default: CampaignKeys) are
// rejected so that typos in config files do not pass silently.
inline void ApplySettings(const KeyValueFile& kv, FuzzConfig& cfg,
                          const std::vector<std::string>& extra_allowed = {}) {
  for (const auto& key : kv.keys()) {
    bool known = false;
    for (const auto& k : CampaignKeys()) known = known || key == k.key;
    for (const auto& k : extra_allowed) known = known || key == NormalizeKey(k);
    if (!known) throw ConfigError("unknown setting '" + key + "'");
  }
  using detail::ParseBool;
  using detail::ParseNumber;
  using detail::ParseReal;
  auto get = [&](const char* k) { return kv.Get(k); };
  if (auto v = get("dut")) cfg.dut = *v;
  if (auto v = get("dut_cmd")) cfg.dut_cmd = SplitCommand(*v);
  if (auto v = get("templates")) cfg.templates_path = *v;
  if (auto v = get("seeds")) cfg.seeds_dir = *v;
  if (auto v = get("out")) cfg.out_dir = *v;
  if (auto v = get("mode")) cfg.mode = ParseExecMode(*v);
  if (auto v = get("threads")) cfg.threads = ParseNumber<size_t>("threads", *v);
  if (auto v = get("batch_size")) cfg.batch_size = ParseNumber<size_t>("batch_size", *v);
  if (auto v = get("max_iters")) cfg.max_iterations = ParseNumber<uint64_t>("max_iters", *v);
  if (auto v = get("stagnation")) cfg.stagnation_window = ParseNumber<uint64_t>("stagnation", *v);
  if (auto v = get("max_seconds")) cfg.max_seconds = ParseReal("max_seconds", *v);
  if (auto v = get("master_seed")) cfg.master_seed = ParseNumber<uint64_t>("master_seed", *v);
  if (auto v = get("favor")) cfg.fitness.favor = ParseReal("favor", *v);
  if (auto v = get("eps")) cfg.fitness.epsilon_fitness = ParseReal("eps", *v);
  if (auto v = get("p_splice")) cfg.mutation.p_splice = ParseReal("p_splice", *v);
  if (auto v = get("max_stack_exp")) {
    cfg.mutation.havoc.max_stack_exp = ParseNumber<unsigned>("max_stack_exp", *v);
  }
  if (auto v = get("max_bytes")) {
    cfg.mutation.max_chromosome_bytes = ParseNumber<size_t>("max_bytes", *v);
  }
  if (auto v = get("strategy")) {
    if (*v == "guided") {
      cfg.mutation.strategy = InputStrategy::kGuided;
    } else if (*v == "random") {
      cfg.mutation.strategy = InputStrategy::kRandom;
    } else {
      throw ConfigError("unknown strategy '" + *v + "' (guided, random)");
    }
  }
  if (auto v = get("collection")) {
    if (*v == "direct") {
      cfg.collection = CoverageCollection::kDirect;
    } else if (*v == "report-file") {
      cfg.collection = CoverageCollection::kReportFile;
    } else {
      throw ConfigError("unknown collection '" + *v + "' (direct, report-file)");
    }
  }
  if (auto v = get("max_corpus")) cfg.max_corpus_size = ParseNumber<size_t>("max_corpus", *v);
  if (auto v = get("coverpoints")) {
    cfg.dut_options.coverpoints = ParseNumber<size_t>("coverpoints", *v);
  }
  if (auto v = get("delay_us")) cfg.dut_options.delay_us = ParseNumber<uint32_t>("delay_us", *v);
  if (auto v = get("timeout_ms")) cfg.subprocess_timeout_ms = ParseNumber<int>("timeout_ms", *v);
  if (auto v = get("max_findings")) cfg.max_finding_files = ParseNumber<size_t>("max_findings", *v);
  if (auto v = get("stop_on_finding")) cfg.stop_on_finding = ParseBool("stop_on_finding", *v);
  try {
    cfg.Validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace hwfuzz

#endif  // HWFUZZ_SETTINGS_HPP_
