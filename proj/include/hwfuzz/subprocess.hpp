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

// Subprocess DUT adapter and its wire protocol.
//
// The fuzzer talks to an external simulator over the child's stdin/stdout.
// All integers are little-endian fixed width. Every request is a frame
//
//   tag: u8, length: u32, body: length bytes
//
//   HELLO  (1)  body empty.  Reply: descriptor (below).
//   RESET  (2)  body empty.  No reply.
//   STEP   (3)  body = count: u32, then count * ceil(width/8) cycle bytes.
//               No reply.
//   GETCOV (4)  body empty.  Reply: count: u32, then count * hits: u32.
//   CHECK  (5)  body empty.  Reply: u8, 1 = pass, 0 = fail.
//
// Descriptor reply:
//   input_width_bits: u32, coverpoint_count: u32, grammar: u8 (0 raw-bits,
//   1 transaction), name_len: u32, name bytes, template_count: u32, then per
//   template: payload_bytes: u32, cycles: u32, name_len: u32, name bytes.
//
// The child exits when its stdin closes.

#ifndef HWFUZZ_SUBPROCESS_HPP_
#define HWFUZZ_SUBPROCESS_HPP_

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hwfuzz/dut.hpp"
#include "hwfuzz/error.hpp"

extern char** environ;

namespace hwfuzz {

namespace wire {

enum Tag : uint8_t { kHello = 1, kReset = 2, kStep = 3, kGetCov = 4, kCheck = 5 };

inline void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline uint32_t GetU32(const uint8_t* p) {
  return uint32_t{p[0]} | (uint32_t{p[1]} << 8) | (uint32_t{p[2]} << 16) |
         (uint32_t{p[3]} << 24);
}

inline void PutString(std::vector<uint8_t>& out, const std::string& s) {
  PutU32(out, static_cast<uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

inline std::vector<uint8_t> Frame(Tag tag, std::span<const uint8_t> body = {}) {
  std::vector<uint8_t> out;
  out.reserve(5 + body.size());
  out.push_back(tag);
  PutU32(out, static_cast<uint32_t>(body.size()));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

inline std::vector<uint8_t> EncodeDescriptor(const DutDescriptor& d) {
  std::vector<uint8_t> out;
  PutU32(out, static_cast<uint32_t>(d.input_width_bits));
  PutU32(out, static_cast<uint32_t>(d.coverpoint_count));
  out.push_back(static_cast<uint8_t>(d.grammar.kind));
  PutString(out, d.name);
  PutU32(out, static_cast<uint32_t>(d.grammar.templates.size()));
  for (const auto& t : d.grammar.templates) {
    PutU32(out, static_cast<uint32_t>(t.payload_bytes));
    PutU32(out, static_cast<uint32_t>(t.cycles));
    PutString(out, t.name);
  }
  return out;
}

inline std::vector<uint8_t> EncodeCoverage(const CoverageVector& cov) {
  std::vector<uint8_t> out;
  out.reserve(4 + 4 * cov.size());
  PutU32(out, static_cast<uint32_t>(cov.size()));
  for (uint32_t h : cov.hits) PutU32(out, h);
  return out;
}

}  // namespace wire

// Blocking byte I/O on a pair of file descriptors, with a read timeout.
class FdChannel {
 public:
  FdChannel(int read_fd, int write_fd, int timeout_ms = -1)
      : read_fd_(read_fd), write_fd_(write_fd), timeout_ms_(timeout_ms) {}

  // Returns false on clean EOF before the first byte.
  bool ReadExact(uint8_t* buf, size_t n, const char* what) {
    size_t got = 0;
    while (got < n) {
      if (timeout_ms_ >= 0) {
        pollfd pfd{read_fd_, POLLIN, 0};
        const int r = ::poll(&pfd, 1, timeout_ms_);
        if (r == 0) {
          throw DutError(std::string("subprocess DUT timed out after ") +
                         std::to_string(timeout_ms_) + " ms waiting for " + what);
        }
        if (r < 0) {
          if (errno == EINTR) continue;
          throw DutError(std::string("poll failed: ") + std::strerror(errno));
        }
      }
      const ssize_t r = ::read(read_fd_, buf + got, n - got);
      if (r == 0) {
        if (got == 0) return false;
        throw DutError(std::string("subprocess DUT closed its output mid-") + what);
      }
      if (r < 0) {
        if (errno == EINTR) continue;
        throw DutError(std::string("read failed: ") + std::strerror(errno));
      }
      got += static_cast<size_t>(r);
    }
    return true;
  }

  void ReadOrThrow(uint8_t* buf, size_t n, const char* what) {
    if (!ReadExact(buf, n, what)) {
      throw DutError(std::string("subprocess DUT closed its output (broken pipe) "
                                 "while waiting for ") + what);
    }
  }

  uint32_t ReadU32(const char* what) {
    uint8_t b[4];
    ReadOrThrow(b, 4, what);
    return wire::GetU32(b);
  }

  void WriteAll(std::span<const uint8_t> bytes) {
    size_t sent = 0;
    while (sent < bytes.size()) {
      const ssize_t r = ::write(write_fd_, bytes.data() + sent, bytes.size() - sent);
      if (r < 0) {
        if (errno == EINTR) continue;
        throw DutError(errno == EPIPE ? std::string("broken pipe writing to subprocess DUT")
                                      : std::string("write failed: ") + std::strerror(errno));
      }
      sent += static_cast<size_t>(r);
    }
  }

 private:
  int read_fd_;
  int write_fd_;
  int timeout_ms_;
};

inline std::string ReadString(FdChannel& ch, const char* what) {
  const uint32_t n = ch.ReadU32(what);
  if (n > (1u << 20)) throw DutError(std::string("implausible string length in ") + what);
  std::string s(n, '\0');
  if (n) ch.ReadOrThrow(reinterpret_cast<uint8_t*>(s.data()), n, what);
  return s;
}

inline DutDescriptor ReadDescriptor(FdChannel& ch) {
  DutDescriptor d;
  d.input_width_bits = ch.ReadU32("HELLO reply");
  d.coverpoint_count = ch.ReadU32("HELLO reply");
  uint8_t kind = 0;
  ch.ReadOrThrow(&kind, 1, "HELLO reply");
  if (kind > 1) throw DutError("HELLO reply: unknown grammar kind " + std::to_string(kind));
  d.grammar.kind = static_cast<GrammarKind>(kind);
  d.name = ReadString(ch, "HELLO reply");
  const uint32_t templates = ch.ReadU32("HELLO reply");
  for (uint32_t i = 0; i < templates; ++i) {
    TransactionTemplate t;
    t.payload_bytes = ch.ReadU32("HELLO reply");
    t.cycles = ch.ReadU32("HELLO reply");
    t.name = ReadString(ch, "HELLO reply");
    d.grammar.templates.push_back(std::move(t));
  }
  return d;
}

// Child side: answer requests for `dut` until stdin closes. Returns a process
// exit status: 0 on clean shutdown, 2 on a protocol error.
inline int ServeDut(Dut& dut, int in_fd = 0, int out_fd = 1) {
  FdChannel ch(in_fd, out_fd);
  const DutDescriptor& desc = dut.descriptor();
  const size_t group = BytesForBits(desc.input_width_bits);
  CoverageVector cov;
  std::vector<uint8_t> body;
  try {
    for (;;) {
      uint8_t header[5];
      if (!ch.ReadExact(header, 1, "request")) return 0;
      ch.ReadOrThrow(header + 1, 4, "request length");
      const uint32_t length = wire::GetU32(header + 1);
      body.resize(length);
      if (length) ch.ReadOrThrow(body.data(), length, "request body");
      switch (header[0]) {
        case wire::kHello:
          ch.WriteAll(wire::EncodeDescriptor(desc));
          break;
        case wire::kReset:
          dut.Reset();
          break;
        case wire::kStep: {
          if (length < 4) return 2;
          const uint32_t count = wire::GetU32(body.data());
          if (length != 4 + uint64_t{count} * group) return 2;
          for (uint32_t c = 0; c < count; ++c) {
            dut.Step(std::span<const uint8_t>(body).subspan(4 + c * group, group));
          }
          break;
        }
        case wire::kGetCov:
          dut.ReadCoverage(cov);
          ch.WriteAll(wire::EncodeCoverage(cov));
          break;
        case wire::kCheck: {
          const uint8_t pass = dut.Check().passed ? 1 : 0;
          ch.WriteAll(std::span<const uint8_t>(&pass, 1));
          break;
        }
        default:
          return 2;
      }
    }
  } catch (const DutError&) {
    return 2;
  }
}

// Parent side. Cycles are buffered and shipped as one STEP frame right before
// the next GETCOV, CHECK or RESET.
class SubprocessDut final : public Dut {
 public:
  explicit SubprocessDut(std::vector<std::string> argv, int timeout_ms = 10000)
      : argv_(std::move(argv)), timeout_ms_(timeout_ms) {
    if (argv_.empty()) throw ConfigError("--dut-cmd needs a program to run");
    ::signal(SIGPIPE, SIG_IGN);
    Spawn();
    try {
      channel_->WriteAll(wire::Frame(wire::kHello));
      desc_ = ReadDescriptor(*channel_);
      desc_.Validate();
    } catch (...) {
      Shutdown();
      throw;
    }
    group_ = BytesForBits(desc_.input_width_bits);
  }

  ~SubprocessDut() override { Shutdown(); }

  SubprocessDut(const SubprocessDut&) = delete;
  SubprocessDut& operator=(const SubprocessDut&) = delete;

  const DutDescriptor& descriptor() const override { return desc_; }

  void Reset() override {
    pending_.clear();
    pending_cycles_ = 0;
    channel_->WriteAll(wire::Frame(wire::kReset));
  }

  void Step(std::span<const uint8_t> input) override {
    pending_.insert(pending_.end(), input.begin(), input.begin() + static_cast<std::ptrdiff_t>(group_));
    ++pending_cycles_;
  }

  void ReadCoverage(CoverageVector& out) override {
    Flush();
    channel_->WriteAll(wire::Frame(wire::kGetCov));
    const uint32_t n = channel_->ReadU32("GETCOV reply");
    if (n != desc_.coverpoint_count) {
      throw DutError("GETCOV reply has " + std::to_string(n) +
                     " counters, descriptor declared " +
                     std::to_string(desc_.coverpoint_count));
    }
    std::vector<uint8_t> raw(4 * size_t{n});
    if (n) channel_->ReadOrThrow(raw.data(), raw.size(), "GETCOV reply");
    out.hits.resize(n);
    for (uint32_t i = 0; i < n; ++i) out.hits[i] = wire::GetU32(raw.data() + 4 * i);
  }

  CheckResult Check() override {
    Flush();
    channel_->WriteAll(wire::Frame(wire::kCheck));
    uint8_t pass = 0;
    channel_->ReadOrThrow(&pass, 1, "CHECK reply");
    if (pass > 1) throw DutError("CHECK reply: expected 0 or 1, got " + std::to_string(pass));
    return pass ? CheckResult{} : CheckResult{false, "subprocess DUT check failed"};
  }

  // Replace the advertised grammar, e.g. with a user-supplied template table.
  void OverrideGrammar(GrammarMode grammar) {
    grammar.Validate();
    desc_.grammar = std::move(grammar);
  }

  pid_t pid() const { return pid_; }

 private:
  void Spawn() {
    int to_child[2], from_child[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0 || ::pipe2(from_child, O_CLOEXEC) != 0) {
      throw DutError(std::string("pipe failed: ") + std::strerror(errno));
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, to_child[0], 0);
    posix_spawn_file_actions_adddup2(&actions, from_child[1], 1);
    std::vector<char*> args;
    for (auto& a : argv_) args.push_back(a.data());
    args.push_back(nullptr);
    const int rc = ::posix_spawnp(&pid_, args[0], &actions, nullptr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(to_child[0]);
    ::close(from_child[1]);
    if (rc != 0) {
      ::close(to_child[1]);
      ::close(from_child[0]);
      throw DutError("cannot start subprocess DUT '" + argv_[0] + "': " + std::strerror(rc));
    }
    write_fd_ = to_child[1];
    read_fd_ = from_child[0];
    channel_ = std::make_unique<FdChannel>(read_fd_, write_fd_, timeout_ms_);
  }

  void Flush() {
    if (pending_cycles_ == 0) return;
    std::vector<uint8_t> body;
    body.reserve(4 + pending_.size());
    wire::PutU32(body, pending_cycles_);
    body.insert(body.end(), pending_.begin(), pending_.end());
    channel_->WriteAll(wire::Frame(wire::kStep, body));
    pending_.clear();
    pending_cycles_ = 0;
  }

  void Shutdown() {
    if (write_fd_ >= 0) ::close(write_fd_);
    if (read_fd_ >= 0) ::close(read_fd_);
    write_fd_ = read_fd_ = -1;
    if (pid_ <= 0) return;
    int status = 0;
    for (int i = 0; i < 100; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) return;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
  }

  std::vector<std::string> argv_;
  int timeout_ms_;
  pid_t pid_ = -1;
  int write_fd_ = -1;
  int read_fd_ = -1;
  std::unique_ptr<FdChannel> channel_;
  DutDescriptor desc_;
  size_t group_ = 1;
  std::vector<uint8_t> pending_;
  uint32_t pending_cycles_ = 0;
};

// Splits a --dut-cmd string on whitespace. No quoting.
inline std::vector<std::string> SplitCommand(const std::string& cmd) {
  std::istringstream in(cmd);
  std::vector<std::string> argv;
  std::string word;
  while (in >> word) argv.push_back(word);
  return argv;
}

}  // namespace hwfuzz

#endif  // HWFUZZ_SUBPROCESS_HPP_
