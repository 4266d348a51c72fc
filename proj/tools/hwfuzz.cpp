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

// hwfuzz command-line entry point.
//
// Exit codes: 0 success, 1 campaign or file error, 2 usage error,
// 3 campaign finished with at least one failing check.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hwfuzz/bench.hpp"
#include "hwfuzz/config.hpp"
#include "hwfuzz/corpus_io.hpp"
#include "hwfuzz/duts/registry.hpp"
#include "hwfuzz/duts/witness.hpp"
#include "hwfuzz/executor.hpp"
#include "hwfuzz/grammar.hpp"
#include "hwfuzz/report.hpp"
#include "hwfuzz/settings.hpp"
#include "hwfuzz/subprocess.hpp"

namespace fs = std::filesystem;
using namespace hwfuzz;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFinding = 3;

std::string FlagName(const std::string& key) {
  std::string f = key;
  for (auto& c : f) {
    if (c == '_') c = '-';
  }
  return "--" + f;
}

// Binds one CLI option per settings key. Values given on the command line
// are layered over the config file afterwards.
class SettingFlags {
 public:
  void Bind(CLI::App* cmd, const std::vector<SettingKey>& keys) {
    for (const auto& k : keys) {
      auto& slot = values_[k.key];
      CLI::Option* opt = nullptr;
      if (k.boolean) {
        opt = cmd->add_flag(FlagName(k.key), flags_[k.key], k.help);
      } else {
        opt = cmd->add_option(FlagName(k.key), slot, k.help);
      }
      options_.emplace_back(k.key, opt);
    }
  }

  void Overlay(KeyValueFile& kv) const {
    for (const auto& [key, opt] : options_) {
      if (opt->count() == 0) continue;
      auto f = flags_.find(key);
      kv.Set(key, f != flags_.end() ? (f->second ? "true" : "false") : values_.at(key));
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> flags_;
  std::vector<std::pair<std::string, CLI::Option*>> options_;
};

KeyValueFile LoadSettings(const std::string& config_path, const SettingFlags& flags) {
  KeyValueFile kv;
  if (!config_path.empty()) kv = KeyValueFile::Load(config_path);
  flags.Overlay(kv);
  return kv;
}

void PrintWarnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::vector<Chromosome> ToChromosomes(const std::vector<duts::Bytes>& all) {
  std::vector<Chromosome> out;
  for (size_t i = 0; i < all.size(); ++i) {
    Chromosome c;
    c.id = i;
    c.bytes = all[i];
    out.push_back(std::move(c));
  }
  return out;
}

int CmdRun(const std::string& config_path, const SettingFlags& flags, bool verbose) {
  FuzzConfig cfg;
  cfg.out_dir = "hwfuzz-out";
  try {
    ApplySettings(LoadSettings(config_path, flags), cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (cfg.seeds_dir.empty()) {
    std::cerr << "error: no seeds directory given (--seeds)\n";
    return kExitUsage;
  }
  if (!fs::is_directory(cfg.seeds_dir)) {
    std::cerr << "error: seeds directory not found: " << cfg.seeds_dir.string() << "\n";
    return kExitUsage;
  }
  if (cfg.dut_cmd.empty() && !duts::IsBundled(cfg.dut)) {
    std::cerr << "error: unknown DUT '" << cfg.dut << "' (try list-duts)\n";
    return kExitUsage;
  }
  if (verbose) {
    cfg.on_merge = [](uint64_t k, const Corpus& corpus, const UpdateSummary& s) {
      if (s.new_points > 0) {
        std::cerr << "iter " << k << ": +" << s.new_points << " points, covered "
                  << corpus.cumulative().covered_count() << ", corpus " << corpus.size()
                  << "\n";
      }
    };
  }
  CampaignReport report;
  try {
    std::vector<std::string> warnings;
    report = RunCampaign(cfg, &warnings);
    PrintWarnings(warnings);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: campaign failed: " << e.what() << "\n";
    if (!cfg.out_dir.empty()) {
      std::cerr << "partial outputs in " << cfg.out_dir.string() << "\n";
    }
    return kExitError;
  }
  std::cout << SummaryText(report);
  std::cout << "outputs in " << cfg.out_dir.string() << "\n";
  if (report.findings > 0) {
    std::cout << report.findings << " failing check(s); first: " << report.first_finding
              << "\n";
    return kExitFinding;
  }
  return kExitOk;
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const std::vector<SettingKey>& BenchKeys() {
  static const std::vector<SettingKey> keys = {
      {"thread_counts", "comma-separated thread counts to sweep"},
      {"modes", "comma-separated parallel modes to sweep"},
      {"seconds", "wall-clock budget per configuration"},
      {"csv", "write the table as CSV to this path"},
      {"cap_to_cores", "drop thread counts above the core count", true},
  };
  return keys;
}

int CmdBench(const std::string& config_path, const SettingFlags& flags) {
  BenchOptions opts;
  opts.base.dut = "synth-delay";
  opts.base.dut_options.delay_us = 1000;
  // Length-preserving mutation keeps every stimulus at the seed length.
  opts.base.mutation.p_splice = 0.0;
  std::string csv_path;
  try {
    KeyValueFile kv = LoadSettings(config_path, flags);
    std::vector<std::string> extra;
    for (const auto& k : BenchKeys()) extra.push_back(k.key);
    // The sweep sets mode and threads itself.
    if (kv.Get("mode") || kv.Get("threads")) {
      throw ConfigError("bench sweeps mode and threads; use --modes and --thread-counts");
    }
    ApplySettings(kv, opts.base, extra);
    if (auto v = kv.Get("thread_counts")) {
      opts.thread_counts.clear();
      for (const auto& t : SplitList(*v)) {
        opts.thread_counts.push_back(detail::ParseNumber<size_t>("thread_counts", t));
      }
    }
    if (auto v = kv.Get("modes")) {
      opts.modes.clear();
      for (const auto& m : SplitList(*v)) opts.modes.push_back(ParseExecMode(m));
    }
    if (auto v = kv.Get("seconds")) opts.seconds_per_config = detail::ParseReal("seconds", *v);
    if (auto v = kv.Get("cap_to_cores")) {
      opts.cap_to_cores = detail::ParseBool("cap_to_cores", *v);
    }
    if (auto v = kv.Get("csv")) csv_path = *v;
    if (opts.base.dut_cmd.empty() && !duts::IsBundled(opts.base.dut)) {
      throw ConfigError("unknown DUT '" + opts.base.dut + "' (try list-duts)");
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    std::vector<Chromosome> seeds;
    if (!opts.base.seeds_dir.empty()) {
      LoadedCorpus loaded =
          LoadCorpus(opts.base.seeds_dir, opts.base.mutation.max_chromosome_bytes);
      PrintWarnings(loaded.warnings);
      seeds = std::move(loaded.chromosomes);
    } else if (opts.base.dut_cmd.empty()) {
      seeds = ToChromosomes(duts::BundledSeeds(opts.base.dut));
    } else {
      throw ConfigError("a subprocess DUT needs --seeds");
    }
    std::vector<std::string> warnings;
    const auto rows = RunBench(opts, seeds, &warnings);
    PrintWarnings(warnings);
    std::cout << FormatBenchTable(rows) << "\n";
    WriteBenchCsv(rows, std::cout);
    if (!csv_path.empty()) {
      std::ofstream out(csv_path);
      if (!out) throw std::runtime_error("cannot write " + csv_path);
      WriteBenchCsv(rows, out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: bench failed: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}

int CmdReport(const std::string& path) {
  fs::path file = path;
  if (fs::is_directory(file)) file /= "report.txt";
  try {
    if (!fs::exists(file)) throw std::runtime_error("report not found: " + file.string());
    const CampaignReport r = ParseReport(KeyValueFile::Load(file.string()), file.string());
    std::cout << std::fixed << std::setprecision(6);
    std::cout << "dut " << r.dut << ", mode " << r.mode << ", " << r.iterations
              << " iterations, stop: " << r.stop_reason << "\n";
    std::cout << "coverage_rate " << r.coverage_rate << " (" << r.covered << "/"
              << r.coverpoints << ")\n";
    std::cout << "findings " << r.findings << "\n";
    std::cout << StageTimingReport(r);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}

int CmdCorpus(const std::string& dir, const std::string& config_path, const SettingFlags& flags,
              bool recompute, bool decode) {
  FuzzConfig cfg;
  if (recompute || decode) {
    try {
      ApplySettings(LoadSettings(config_path, flags), cfg);
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  try {
    LoadedCorpus loaded = LoadCorpus(dir, SIZE_MAX);
    PrintWarnings(loaded.warnings);
    std::cout << loaded.chromosomes.size() << " seeds in " << dir << "\n";
    std::unique_ptr<Simulator> sim;
    if (recompute || decode) {
      sim = std::make_unique<Simulator>(MakeDutFactory(cfg)(), CoverageCollection::kDirect,
                                        fs::path{});
    }
    std::vector<uint64_t> union_hits;
    if (sim) union_hits.assign(sim->dut().descriptor().coverpoint_count, 0);
    for (const auto& c : loaded.chromosomes) {
      std::cout << "seed " << c.id << "\tlen " << c.bytes.size();
      if (recompute) {
        const RunOutcome o = sim->Run(c);
        for (size_t i = 0; i < union_hits.size(); ++i) union_hits[i] += o.coverage.hits[i];
        std::cout << "\tcovered " << o.coverage.CoveredCount()
                  << (o.check.passed ? "" : "\tcheck FAILED");
      }
      std::cout << "\n";
      if (decode) {
        const DutDescriptor& d = sim->dut().descriptor();
        std::cout << DecodeReport(Translate(c.bytes, d.input_width_bits, d.grammar, c.id),
                                  d.grammar.templates);
      }
    }
    if (recompute) {
      size_t covered = 0;
      for (uint64_t h : union_hits) covered += (h != 0);
      std::cout << "recomputed covered " << covered << "/" << union_hits.size() << "\n";
      const fs::path recorded = fs::path(dir).parent_path() / "coverage.tsv";
      if (fs::exists(recorded)) {
        std::ifstream in(recorded);
        const CoverageSnapshot snap = ReadCoverageSnapshot(in);
        bool same = snap.hit_totals.size() == union_hits.size();
        for (size_t i = 0; same && i < union_hits.size(); ++i) {
          same = (snap.hit_totals[i] != 0) == (union_hits[i] != 0);
        }
        std::cout << "recorded covered " << snap.covered_count() << "/"
                  << snap.hit_totals.size() << " (" << recorded.string() << "): "
                  << (same ? "match" : "MISMATCH") << "\n";
        if (!same) return kExitError;
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}

int CmdListDuts() {
  for (const auto& name : duts::BundledNames()) {
    const DutDescriptor d = duts::BundledDescriptor(name);
    std::cout << name << "\twidth " << d.input_width_bits << "\tcoverpoints "
              << d.coverpoint_count << "\tgrammar " << GrammarKindName(d.grammar.kind)
              << "\n  " << duts::BundledSummary(name) << "\n";
  }
  return kExitOk;
}

int CmdServeDut(const std::string& name, size_t coverpoints, uint32_t delay_us) {
  duts::DutOptions opts;
  opts.coverpoints = coverpoints;
  opts.delay_us = delay_us;
  try {
    auto dut = duts::BundledFactory(name, opts)();
    return ServeDut(*dut);
  } catch (const std::exception& e) {
    std::cerr << "serve-dut: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hwfuzz: coverage-guided fuzzing for cycle-level hardware models"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  bool verbose = false;
  app.add_option("--config", config_path, "key = value settings file; flags override it");
  app.add_flag("-v,--verbose", verbose, "progress on stderr");

  SettingFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "run a fuzzing campaign");
  run_flags.Bind(run, CampaignKeys());

  SettingFlags bench_flags;
  CLI::App* bench = app.add_subcommand("bench", "throughput sweep over modes and thread counts");
  std::vector<SettingKey> bench_keys;
  for (const auto& k : CampaignKeys()) {
    const std::string key = k.key;
    if (key != "mode" && key != "threads") bench_keys.push_back(k);
  }
  for (const auto& k : BenchKeys()) bench_keys.push_back(k);
  bench_flags.Bind(bench, bench_keys);

  std::string report_path;
  CLI::App* report = app.add_subcommand("report", "print a campaign report");
  report->add_option("path", report_path, "report.txt or a campaign output directory")
      ->required();

  std::string corpus_dir;
  bool recompute = false;
  bool decode = false;
  SettingFlags corpus_flags;
  CLI::App* corpus = app.add_subcommand("corpus", "list a corpus directory");
  corpus->add_option("dir", corpus_dir, "corpus directory")->required();
  corpus->add_flag("--recompute", recompute, "re-execute every seed and report coverage");
  corpus->add_flag("--decode", decode, "print each seed's decoded stimulus");
  std::vector<SettingKey> dut_keys;
  for (const auto& k : CampaignKeys()) {
    const std::string key = k.key;
    if (key == "dut" || key == "dut_cmd" || key == "templates" || key == "coverpoints" ||
        key == "delay_us" || key == "timeout_ms") {
      dut_keys.push_back(k);
    }
  }
  corpus_flags.Bind(corpus, dut_keys);

  CLI::App* list = app.add_subcommand("list-duts", "list bundled DUT models");

  std::string serve_name;
  size_t serve_coverpoints = duts::SynthDelay::kDefaultCoverpoints;
  uint32_t serve_delay = 0;
  CLI::App* serve = app.add_subcommand("serve-dut", "");  // empty description hides it
  serve->add_option("--dut", serve_name)->required();
  serve->add_option("--coverpoints", serve_coverpoints);
  serve->add_option("--delay-us", serve_delay);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  if (run->parsed()) return CmdRun(config_path, run_flags, verbose);
  if (bench->parsed()) return CmdBench(config_path, bench_flags);
  if (report->parsed()) return CmdReport(report_path);
  if (corpus->parsed()) return CmdCorpus(corpus_dir, config_path, corpus_flags, recompute, decode);
  if (list->parsed()) return CmdListDuts();
  if (serve->parsed()) return CmdServeDut(serve_name, serve_coverpoints, serve_delay);
  return kExitUsage;
}
