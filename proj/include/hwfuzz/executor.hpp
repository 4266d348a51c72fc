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

// Campaign engine.
//
// serial     one input per iteration, simulated on the coordinator thread.
// batch      batch_size inputs per iteration, simulated by the worker pool;
//            the coordinator waits, then merges results in slot order.
// pipelined  while the workers simulate iteration k the coordinator merges
//            iteration k-1 and generates iteration k+1. Inputs for k+1 are
//            therefore generated from a corpus that does not yet contain
//            the results of k. Inputs and outcomes live in ping-pong slots
//            indexed by iteration parity.
//
// Each input draws randomness from a sub-stream keyed by (master seed,
// iteration, slot) and results are merged in slot order, so the outcome of a
// campaign does not depend on thread scheduling.

#ifndef HWFUZZ_EXECUTOR_HPP_
#define HWFUZZ_EXECUTOR_HPP_

#include <algorithm>
#include <array>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "hwfuzz/corpus.hpp"
#include "hwfuzz/corpus_io.hpp"
#include "hwfuzz/coverage.hpp"
#include "hwfuzz/dut.hpp"
#include "hwfuzz/duts/registry.hpp"
#include "hwfuzz/mutation.hpp"
#include "hwfuzz/report.hpp"
#include "hwfuzz/simulate.hpp"
#include "hwfuzz/stats.hpp"
#include "hwfuzz/subprocess.hpp"

namespace hwfuzz {

enum class ExecMode { kSerial, kBatch, kPipelined };

inline const char* ExecModeName(ExecMode m) {
  switch (m) {
    case ExecMode::kSerial: return "serial";
    case ExecMode::kBatch: return "batch";
    case ExecMode::kPipelined: return "pipelined";
  }
  return "unknown";
}

inline ExecMode ParseExecMode(const std::string& s) {
  if (s == "serial") return ExecMode::kSerial;
  if (s == "batch") return ExecMode::kBatch;
  if (s == "pipelined") return ExecMode::kPipelined;
  throw ConfigError("unknown mode '" + s + "' (serial, batch, pipelined)");
}

struct FuzzConfig {
  // DUT selection: a bundled model by name, or an external simulator command.
  std::string dut = "toy-cpu";
  std::vector<std::string> dut_cmd;
  duts::DutOptions dut_options;
  std::string templates_path;
  int subprocess_timeout_ms = 10000;

  ExecMode mode = ExecMode::kSerial;
  size_t threads = 1;
  // 0 means "same as threads".
  size_t batch_size = 0;

  uint64_t max_iterations = 100000;
  uint64_t stagnation_window = 10000;
  // 0 disables the wall-clock budget.
  double max_seconds = 0.0;
  uint64_t master_seed = 1;

  FitnessParams fitness;
  MutationParams mutation;
  size_t max_corpus_size = Corpus::kDefaultMaxSeeds;
  CoverageCollection collection = CoverageCollection::kDirect;

  std::filesystem::path seeds_dir;
  std::filesystem::path out_dir;
  bool stop_on_finding = false;
  size_t max_finding_files = 64;

  // Test hook: runs still feed cumulative coverage but the corpus never
  // changes, so the input stream depends only on the master seed.
  bool freeze_corpus = false;

  // Observers, called on the coordinator thread.
  std::function<void(uint64_t iteration, std::span<const Chromosome>)> on_inputs;
  std::function<void(uint64_t iteration, const Corpus&, const UpdateSummary&)> on_merge;

  size_t effective_batch_size() const {
    if (mode == ExecMode::kSerial) return 1;
    return batch_size == 0 ? threads : batch_size;
  }

  void Validate() const {
    if (threads == 0) throw ConfigError("threads must be >= 1");
    if (mode == ExecMode::kSerial && threads != 1) {
      throw ConfigError("serial mode runs exactly 1 thread (got --threads " +
                        std::to_string(threads) + ")");
    }
    fitness.Validate();
    mutation.Validate();
  }
};

// Fixed set of worker threads, each owning one Simulator. Launch hands the
// workers a batch; Wait blocks until every slot has an outcome.
class WorkerPool {
 public:
  explicit WorkerPool(std::vector<std::unique_ptr<Simulator>> sims)
      : sims_(std::move(sims)) {
    threads_.reserve(sims_.size());
    for (size_t w = 0; w < sims_.size(); ++w) {
      threads_.emplace_back([this, w] { WorkerLoop(w); });
    }
  }

  ~WorkerPool() {
    {
      std::lock_guard<std::mutex> lk(mu_);
      if (active_ > 0) {
        // Drain before tearing down.
        next_.store(SIZE_MAX);
      }
      stop_ = true;
    }
    work_cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  size_t size() const { return sims_.size(); }

  void Launch(std::span<const Chromosome> inputs, std::vector<RunOutcome>& outputs) {
    outputs.assign(inputs.size(), RunOutcome{});
    {
      std::lock_guard<std::mutex> lk(mu_);
      inputs_ = inputs;
      outputs_ = &outputs;
      next_.store(0);
      active_ = sims_.size();
      error_ = nullptr;
      launched_ = Clock::now();
      ++generation_;
    }
    work_cv_.notify_all();
  }

  // Returns the wall time from Launch until the last worker finished.
  Seconds Wait() {
    std::unique_lock<std::mutex> lk(mu_);
    done_cv_.wait(lk, [&] { return active_ == 0; });
    if (error_) std::rethrow_exception(error_);
    return finished_ - launched_;
  }

 private:
  void WorkerLoop(size_t w) {
    uint64_t seen = 0;
    for (;;) {
      std::span<const Chromosome> inputs;
      std::vector<RunOutcome>* outputs = nullptr;
      {
        std::unique_lock<std::mutex> lk(mu_);
        work_cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
        inputs = inputs_;
        outputs = outputs_;
      }
      for (;;) {
        const size_t i = next_.fetch_add(1);
        if (i >= inputs.size()) break;
        try {
          (*outputs)[i] = sims_[w]->Run(inputs[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lk(mu_);
          if (!error_) error_ = std::current_exception();
          next_.store(SIZE_MAX / 2);
        }
      }
      {
        std::lock_guard<std::mutex> lk(mu_);
        if (--active_ == 0) {
          finished_ = Clock::now();
          done_cv_.notify_all();
        }
      }
    }
  }

  std::vector<std::unique_ptr<Simulator>> sims_;
  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable work_cv_;
  std::condition_variable done_cv_;
  std::span<const Chromosome> inputs_;
  std::vector<RunOutcome>* outputs_ = nullptr;
  std::atomic<size_t> next_{0};
  size_t active_ = 0;
  uint64_t generation_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
  Clock::time_point launched_;
  Clock::time_point finished_;
};

// Two input slots and two outcome slots, selected by iteration parity.
// Slot k%2 is written by getInputs(k) and read by the workers at k; it is
// rewritten by getInputs(k+2) only after updateSeedCorpus(k) consumed it.
struct PingPongBuffers {
  std::array<std::vector<Chromosome>, 2> inputs;
  std::array<std::vector<RunOutcome>, 2> outcomes;

  std::vector<Chromosome>& In(uint64_t k) { return inputs[k & 1]; }
  std::vector<RunOutcome>& Out(uint64_t k) { return outcomes[k & 1]; }
};

struct FindingRecord {
  uint64_t iteration = 0;
  uint64_t chromosome_id = 0;
  std::string message;
};

class Campaign {
 public:
  Campaign(FuzzConfig config, DutFactory factory, std::vector<Chromosome> initial_seeds)
      : config_(std::move(config)),
        factory_(std::move(factory)) {
    config_.Validate();
    if (initial_seeds.empty()) throw CorpusError("no seeds found: a campaign needs initial seeds");
    auto probe = factory_();
    desc_ = probe->descriptor();
    desc_.Validate();
    sims_.push_back(MakeSimulator(std::move(probe), 0));
    corpus_.emplace(desc_.coverpoint_count, config_.fitness, config_.max_corpus_size);
    for (auto& c : initial_seeds) {
      if (c.bytes.size() > config_.mutation.max_chromosome_bytes) {
        c.bytes.resize(config_.mutation.max_chromosome_bytes);
      }
    }
    corpus_->AddInitialSeeds(initial_seeds);
    corpus_->set_frozen(config_.freeze_corpus);
    generator_.emplace(config_.mutation, config_.master_seed, std::move(initial_seeds));
  }

  CampaignReport Run() {
    start_ = Clock::now();
    try {
      switch (config_.mode) {
        case ExecMode::kSerial: RunSerial(); break;
        case ExecMode::kBatch: RunBatch(); break;
        case ExecMode::kPipelined: RunPipelined(); break;
      }
    } catch (const std::exception& e) {
      stop_reason_ = "error";
      error_ = e.what();
      pool_.reset();
      Finish();
      throw;
    }
    pool_.reset();
    return Finish();
  }

  const Corpus& corpus() const { return *corpus_; }
  const DutDescriptor& descriptor() const { return desc_; }
  const std::vector<FindingRecord>& findings() const { return findings_; }
  const CampaignReport& report() const { return report_; }

 private:
  std::unique_ptr<Simulator> MakeSimulator(std::unique_ptr<Dut> dut, size_t worker) {
    std::filesystem::path scratch;
    if (config_.collection == CoverageCollection::kReportFile) {
      const auto dir = config_.out_dir.empty() ? std::filesystem::temp_directory_path()
                                               : config_.out_dir;
      std::filesystem::create_directories(dir);
      scratch = dir / ("coverage-w" + std::to_string(worker) + "-" +
                       std::to_string(reinterpret_cast<uintptr_t>(this)) + ".dat");
    }
    return std::make_unique<Simulator>(std::move(dut), config_.collection, scratch);
  }

  void StartPool() {
    std::vector<std::unique_ptr<Simulator>> sims = std::move(sims_);
    sims_.clear();
    while (sims.size() < config_.threads) sims.push_back(MakeSimulator(factory_(), sims.size()));
    pool_ = std::make_unique<WorkerPool>(std::move(sims));
  }

  std::vector<Chromosome> Generate(uint64_t k, size_t n) {
    ScopedStage t(timer_, Stage::kMutation);
    auto inputs = generator_->GetInputs(*corpus_, n, k);
    if (config_.on_inputs) config_.on_inputs(k, inputs);
    return inputs;
  }

  // updateSeedCorpus for one finished iteration. Returns true when a
  // termination condition holds afterwards.
  bool Merge(uint64_t k, std::span<const Chromosome> inputs,
             std::span<const RunOutcome> outcomes) {
    ScopedStage t(timer_, Stage::kCoverageCorpus);
    std::vector<CoverageVector> runs;
    runs.reserve(outcomes.size());
    for (const auto& o : outcomes) {
      runs.push_back(o.coverage);
      timer_.AddCycles(o.cycles);
      coverage_seconds_ += o.coverage_seconds;
    }
    const UpdateSummary summary = corpus_->UpdateSeedCorpus(inputs, runs, k);
    for (size_t i = 0; i < outcomes.size(); ++i) {
      if (!outcomes[i].check.passed) RecordFinding(k, inputs[i], outcomes[i].check);
    }
    retained_ += summary.retained;
    inputs_executed_ += inputs.size();
    iterations_ = k + 1;
    timer_.AddIteration();
    const size_t covered = corpus_->cumulative().covered_count();
    if (trajectory_.empty() || trajectory_.back().second != covered) {
      trajectory_.emplace_back(k, covered);
    }
    if (config_.on_merge) config_.on_merge(k, *corpus_, summary);

    if (config_.stop_on_finding && !findings_.empty()) return Stop("finding");
    if (config_.stagnation_window > 0 &&
        corpus_->stagnation_counter() >= config_.stagnation_window) {
      return Stop("stagnation");
    }
    if (config_.max_seconds > 0 &&
        Seconds(Clock::now() - start_).count() >= config_.max_seconds) {
      return Stop("time-budget");
    }
    return false;
  }

  bool Stop(const char* reason) {
    stop_reason_ = reason;
    return true;
  }

  bool MoreIterations(uint64_t next) const { return next < config_.max_iterations; }

  void RunSerial() {
    Simulator& sim = *sims_.front();
    for (uint64_t k = 0; MoreIterations(k); ++k) {
      auto inputs = Generate(k, 1);
      std::vector<RunOutcome> outcomes(1);
      {
        ScopedStage t(timer_, Stage::kSimulation);
        outcomes[0] = sim.Run(inputs[0]);
      }
      if (Merge(k, inputs, outcomes)) return;
    }
    stop_reason_ = "max-iterations";
  }

  void RunBatch() {
    StartPool();
    const size_t n = config_.effective_batch_size();
    std::vector<RunOutcome> outcomes;
    for (uint64_t k = 0; MoreIterations(k); ++k) {
      auto inputs = Generate(k, n);
      {
        ScopedStage t(timer_, Stage::kSimulation);
        pool_->Launch(inputs, outcomes);
        pool_->Wait();
      }
      if (Merge(k, inputs, outcomes)) return;
    }
    stop_reason_ = "max-iterations";
  }

  void RunPipelined() {
    StartPool();
    stop_reason_ = "max-iterations";
    if (!MoreIterations(0)) return;
    const size_t n = config_.effective_batch_size();
    PingPongBuffers buf;
    buf.In(0) = Generate(0, n);
    pool_->Launch(buf.In(0), buf.Out(0));
    for (uint64_t k = 0;; ++k) {
      // Workers are simulating k.
      bool stop = false;
      if (k >= 1) stop = Merge(k - 1, buf.In(k - 1), buf.Out(k - 1));
      const bool next = !stop && MoreIterations(k + 1);
      if (next) buf.In(k + 1) = Generate(k + 1, n);
      timer_.Record(Stage::kSimulation, pool_->Wait());
      if (!next) {
        // Drain: the in-flight iteration is merged before reporting. Its
        // own termination verdict no longer matters.
        const std::string reason = stop_reason_;
        Merge(k, buf.In(k), buf.Out(k));
        stop_reason_ = reason;
        return;
      }
      pool_->Launch(buf.In(k + 1), buf.Out(k + 1));
    }
  }

  void RecordFinding(uint64_t k, const Chromosome& c, const CheckResult& check) {
    FindingRecord rec{k, c.id, check.message.empty() ? "check failed" : check.message};
    if (findings_.empty()) {
      first_finding_iteration_ = k;
      first_finding_ = rec.message;
    }
    ++findings_total_;
    if (findings_.size() < config_.max_finding_files &&
        finding_bytes_.insert(std::string(c.bytes.begin(), c.bytes.end())).second) {
      if (!config_.out_dir.empty()) {
        const auto dir = config_.out_dir / "findings";
        std::filesystem::create_directories(dir);
        WriteFileBytes(dir / ("finding-" + std::to_string(findings_.size()) + ".bin"), c.bytes);
      }
      findings_.push_back(std::move(rec));
    }
  }

  CampaignReport Finish() {
    const double wall = Seconds(Clock::now() - start_).count();
    CampaignReport& r = report_;
    r.dut = desc_.name;
    r.mode = ExecModeName(config_.mode);
    r.threads = config_.threads;
    r.batch_size = config_.effective_batch_size();
    r.master_seed = config_.master_seed;
    r.collection = config_.collection == CoverageCollection::kDirect ? "direct" : "report-file";
    r.stop_reason = stop_reason_;
    r.error = error_;
    r.iterations = iterations_;
    r.inputs_executed = inputs_executed_;
    r.cycles_executed = timer_.cycles();
    r.coverpoints = desc_.coverpoint_count;
    r.covered = corpus_->cumulative().covered_count();
    r.coverage_rate = corpus_->cumulative().CoverageRate();
    r.corpus_size = corpus_->size();
    r.retained_seeds = retained_;
    r.findings = findings_total_;
    r.first_finding_iteration = first_finding_iteration_;
    r.first_finding = first_finding_;
    r.trajectory = trajectory_;
    r.wall_seconds = wall;
    r.throughput = wall > 0 ? Throughput(timer_, wall) : 0.0;
    r.timer = timer_;
    r.coverage_collection_seconds = coverage_seconds_;
    r.overlapped_stages = config_.mode == ExecMode::kPipelined;
    if (!config_.out_dir.empty()) WriteOutputs();
    return r;
  }

  void WriteOutputs() {
    const auto& out = config_.out_dir;
    std::filesystem::create_directories(out);
    SaveCorpus(*corpus_, out / "corpus");
    {
      std::ofstream f(out / "report.txt");
      WriteReport(report_, f);
    }
    {
      std::ofstream f(out / "summary.txt");
      f << SummaryText(report_);
    }
    {
      std::ofstream f(out / "coverage.tsv");
      WriteCoverageSnapshot(corpus_->cumulative(), f);
    }
  }

  FuzzConfig config_;
  DutFactory factory_;
  DutDescriptor desc_;
  std::vector<std::unique_ptr<Simulator>> sims_;
  std::unique_ptr<WorkerPool> pool_;
  std::optional<Corpus> corpus_;
  std::optional<InputGenerator> generator_;
  StageTimer timer_;
  Clock::time_point start_;
  double coverage_seconds_ = 0.0;
  uint64_t iterations_ = 0;
  uint64_t inputs_executed_ = 0;
  size_t retained_ = 0;
  std::vector<std::pair<uint64_t, size_t>> trajectory_;
  std::vector<FindingRecord> findings_;
  std::unordered_set<std::string> finding_bytes_;
  uint64_t findings_total_ = 0;
  uint64_t first_finding_iteration_ = 0;
  std::string first_finding_;
  std::string stop_reason_;
  std::string error_;
  CampaignReport report_;
};

// Resolves the DUT named by the config: a bundled model or a subprocess.
inline DutFactory MakeDutFactory(const FuzzConfig& config) {
  std::optional<GrammarMode> grammar;
  if (!config.templates_path.empty()) {
    grammar = GrammarMode::Transactions(LoadTemplateTable(config.templates_path));
  }
  if (!config.dut_cmd.empty()) {
    const auto argv = config.dut_cmd;
    const int timeout = config.subprocess_timeout_ms;
    return [argv, timeout, grammar]() -> std::unique_ptr<Dut> {
      auto dut = std::make_unique<SubprocessDut>(argv, timeout);
      if (grammar) {
        dut->OverrideGrammar(*grammar);
      } else if (dut->descriptor().grammar.kind == GrammarKind::kTransaction &&
                 dut->descriptor().grammar.templates.empty()) {
        throw ConfigError("subprocess DUT uses a transaction grammar but sent no "
                          "templates; pass --templates");
      }
      return dut;
    };
  }
  if (grammar) {
    throw ConfigError("--templates only applies to subprocess DUTs");
  }
  return duts::BundledFactory(config.dut, config.dut_options);
}

// Loads seeds from config.seeds_dir and runs the configured campaign.
inline CampaignReport RunCampaign(const FuzzConfig& config,
                                  std::vector<std::string>* warnings = nullptr) {
  LoadedCorpus seeds = LoadCorpus(config.seeds_dir, config.mutation.max_chromosome_bytes);
  if (warnings) *warnings = seeds.warnings;
  Campaign campaign(config, MakeDutFactory(config), std::move(seeds.chromosomes));
  return campaign.Run();
}

}  // namespace hwfuzz

#endif  // HWFUZZ_EXECUTOR_HPP_
