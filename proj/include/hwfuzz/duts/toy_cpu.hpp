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

// toy-cpu: a streamed-instruction accumulator machine.
//
// Each transaction is one instruction. The machine has a 32-bit accumulator,
// zero/negative flags, a 16-word data memory, a second 16-word secure bank
// and eight CSRs. Conditional branches squash up to three of the following
// streamed instructions and move the PC; leaving the 0..255 PC window traps.
// A KEY instruction advances an eight-step unlock sequence; completing it
// enters privileged mode, where loads and stores go to the secure bank and
// CSRs 6 and 7 become accessible.
//
// Hazard coverpoints record a privileged load issued right after a
// privileged store, and the same-address case.
//
// Planted bug: in privileged mode, a store to secure word 15 immediately
// followed by any load returns a stale value and fails the check.

#ifndef HWFUZZ_DUTS_TOY_CPU_HPP_
#define HWFUZZ_DUTS_TOY_CPU_HPP_

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hwfuzz/dut.hpp"

namespace hwfuzz::duts {

class ToyCpu final : public InstrumentedDut {
 public:
  enum Op : uint8_t {
    kNop, kLdi, kAddi, kSubi, kAndi, kXori, kShift, kLd, kSt,
    kBeq, kBne, kBlt, kCsr, kKey, kHalt, kNumOps
  };

  static constexpr size_t kInputWidth = 35;
  static constexpr size_t kMemWords = 16;
  static constexpr size_t kUnlockSteps = 8;
  static constexpr std::array<uint8_t, kUnlockSteps> kUnlockKey = {3, 1, 0, 2, 2, 1, 3, 0};
  static constexpr uint8_t kKeyMask = 3;

  static std::vector<TransactionTemplate> Templates() {
    return {{"nop", 0, 1},  {"ldi", 2, 1},  {"addi", 2, 1}, {"subi", 2, 1},
            {"andi", 2, 1}, {"xori", 2, 1}, {"shift", 1, 1}, {"ld", 1, 1},
            {"st", 1, 1},   {"beq", 1, 1},  {"bne", 1, 1},  {"blt", 1, 1},
            {"csr", 1, 1},  {"key", 1, 1},  {"halt", 0, 1}};
  }

  // Coverpoint layout.
  static constexpr size_t kOpArm = 0;                      // 15
  static constexpr size_t kResult = kOpArm + kNumOps;      // 8 writers x {zero,pos,neg}
  static constexpr size_t kCarry = kResult + 8 * 3;
  static constexpr size_t kBorrow = kCarry + 1;
  static constexpr size_t kShiftDir = kBorrow + 1;         // left, right
  static constexpr size_t kBranch = kShiftDir + 2;         // 3 x {taken, not}
  static constexpr size_t kSquash = kBranch + 6;           // 1..3
  static constexpr size_t kStreak = kSquash + 3;           // 2, 3 taken in a row
  static constexpr size_t kLdAddr = kStreak + 2;           // 16
  static constexpr size_t kStAddr = kLdAddr + kMemWords;   // 16
  static constexpr size_t kCsrRead = kStAddr + kMemWords;  // 0..5
  static constexpr size_t kCsrWrite = kCsrRead + 6;        // 0..5
  static constexpr size_t kTrap = kCsrWrite + 6;           // illegal csr, pc range, protected store
  static constexpr size_t kDoubleTrap = kTrap + 3;
  static constexpr size_t kTrapReturn = kDoubleTrap + 1;
  static constexpr size_t kKeyHit = kTrapReturn + 1;
  static constexpr size_t kKeyMiss = kKeyHit + 1;          // per step 0..7
  static constexpr size_t kUnlockStep = kKeyMiss + kUnlockSteps;  // reached 1..8
  static constexpr size_t kPrivCsr = kUnlockStep + kUnlockSteps;  // r6 r7 w6 w7
  static constexpr size_t kPrivHalt = kPrivCsr + 4;
  static constexpr size_t kSecureLd = kPrivHalt + 1;       // 16
  static constexpr size_t kSecureSt = kSecureLd + kMemWords;  // 16
  static constexpr size_t kAccMsb = kSecureSt + kMemWords;  // 32
  static constexpr size_t kHazard = kAccMsb + 32;          // st->ld, same address
  static constexpr size_t kAfterHalt = kHazard + 2;
  static constexpr size_t kCoverpoints = kAfterHalt + 1;

  static DutDescriptor Descriptor() {
    return {"toy-cpu", kInputWidth, kCoverpoints,
            GrammarMode::Transactions(Templates()), 0};
  }

  ToyCpu() : InstrumentedDut(Descriptor()) {
    names_ = MakeNames();
    Reset();
  }

  void Step(std::span<const uint8_t> in) override {
    const uint8_t opcode = in[0];
    // Immediates are sign-extended 16-bit values.
    const uint32_t imm = static_cast<uint32_t>(
        static_cast<int32_t>(static_cast<int16_t>(in[2] | (in[3] << 8))));
    const uint8_t p = in[2];
    if (halted_) {
      Cover(kAfterHalt);
      return;
    }
    if (squash_ > 0) {
      --squash_;
      return;
    }
    if (opcode >= kNumOps) return;  // unreachable through the bundled grammar
    Cover(kOpArm + opcode);
    const int last_secure_store = last_secure_store_;
    last_secure_store_ = -1;
    ++pc_;

    switch (opcode) {
      case kNop:
        break;
      case kLdi: WriteAcc(0, imm); break;
      case kAddi: {
        const uint64_t wide = uint64_t{acc_} + imm;
        CoverIf(wide >> 32, kCarry);
        WriteAcc(1, static_cast<uint32_t>(wide));
        break;
      }
      case kSubi:
        CoverIf(acc_ < imm, kBorrow);
        WriteAcc(2, acc_ - imm);
        break;
      case kAndi: WriteAcc(3, acc_ & imm); break;
      case kXori: WriteAcc(4, acc_ ^ imm); break;
      case kShift: {
        const unsigned amount = p & 31;
        const bool right = p & 32;
        Cover(kShiftDir + (right ? 1 : 0));
        WriteAcc(5, right ? acc_ >> amount : acc_ << amount);
        break;
      }
      case kLd: {
        const size_t addr = p & (kMemWords - 1);
        if (privileged_) {
          Cover(kSecureLd + addr);
          if (last_secure_store >= 0) {
            Cover(kHazard);
            CoverIf(static_cast<size_t>(last_secure_store) == addr, kHazard + 1);
          }
          if (last_secure_store == 15) {
            Fail("stale secure load right after a privileged store to word 15");
          }
          WriteAcc(6, secure_[addr]);
        } else {
          Cover(kLdAddr + addr);
          WriteAcc(6, mem_[addr]);
        }
        break;
      }
      case kSt: {
        const size_t addr = p & (kMemWords - 1);
        if (privileged_) {
          Cover(kSecureSt + addr);
          secure_[addr] = acc_;
          last_secure_store_ = static_cast<int>(addr);
        } else {
          Cover(kStAddr + addr);
          if (addr == 15) {
            Trap(2);
          } else {
            mem_[addr] = acc_;
          }
        }
        break;
      }
      case kBeq: Branch(0, acc_ == 0, p); break;
      case kBne: Branch(1, acc_ != 0, p); break;
      case kBlt: Branch(2, (acc_ >> 31) != 0, p); break;
      case kCsr: {
        const size_t idx = p & 7;
        const bool write = p & 8;
        if (idx >= 6) {
          if (!privileged_) {
            Trap(0);
            break;
          }
          Cover(kPrivCsr + (write ? 2 : 0) + (idx - 6));
        } else {
          Cover((write ? kCsrWrite : kCsrRead) + idx);
        }
        if (write) {
          csr_[idx] = acc_;
          if (idx == 0 && in_trap_) {
            Cover(kTrapReturn);
            in_trap_ = false;
          }
        } else {
          WriteAcc(7, csr_[idx]);
        }
        break;
      }
      case kKey:
        if (unlock_step_ < kUnlockSteps) {
          if ((p & kKeyMask) == kUnlockKey[unlock_step_]) {
            Cover(kKeyHit);
            ++unlock_step_;
            Cover(kUnlockStep + unlock_step_ - 1);
            if (unlock_step_ == kUnlockSteps) privileged_ = true;
          } else {
            Cover(kKeyMiss + unlock_step_);
          }
        }
        break;
      case kHalt:
        CoverIf(privileged_, kPrivHalt);
        halted_ = true;
        break;
    }
  }

 protected:
  void ResetState() override {
    acc_ = 0;
    pc_ = 0;
    mem_.fill(0);
    secure_.fill(0);
    csr_.fill(0);
    squash_ = 0;
    streak_ = 0;
    unlock_step_ = 0;
    privileged_ = false;
    in_trap_ = false;
    halted_ = false;
    last_secure_store_ = -1;
  }

 private:
  void WriteAcc(size_t writer, uint32_t value) {
    acc_ = value;
    const size_t cls = value == 0 ? 0 : ((value >> 31) ? 2 : 1);
    Cover(kResult + writer * 3 + cls);
    if (value != 0) Cover(kAccMsb + (31 - std::countl_zero(value)));
  }

  void Branch(size_t which, bool taken, uint8_t p) {
    Cover(kBranch + which * 2 + (taken ? 0 : 1));
    if (!taken) {
      streak_ = 0;
      return;
    }
    ++streak_;
    if (streak_ >= 2) Cover(kStreak + (streak_ >= 3 ? 1 : 0));
    squash_ = p & 3;
    if (squash_ > 0) Cover(kSquash + squash_ - 1);
    const int offset = static_cast<int8_t>(p) >> 2;  // signed 6-bit
    const int target = static_cast<int>(pc_) + offset;
    if (target < 0 || target > 255) {
      Trap(1);
    } else {
      pc_ = static_cast<uint32_t>(target);
    }
  }

  void Trap(size_t cause) {
    Cover(kTrap + cause);
    if (in_trap_) Cover(kDoubleTrap);
    in_trap_ = true;
    csr_[1] = cause;
    pc_ = 0x80;
  }

  static std::vector<std::string> MakeNames() {
    static const char* kOps[] = {"nop", "ldi", "addi", "subi", "andi",
                                 "xori", "shift", "ld", "st", "beq",
                                 "bne", "blt", "csr", "key", "halt"};
    static const char* kWriters[] = {"ldi", "addi", "subi", "andi",
                                     "xori", "shift", "ld", "csr"};
    std::vector<std::string> n;
    for (auto* op : kOps) n.push_back(std::string("decode.") + op);
    for (auto* w : kWriters) {
      for (auto* cls : {"zero", "pos", "neg"}) {
        n.push_back(std::string("result.") + w + "." + cls);
      }
    }
    n.push_back("alu.carry");
    n.push_back("alu.borrow");
    n.push_back("shift.left");
    n.push_back("shift.right");
    for (auto* b : {"beq", "bne", "blt"}) {
      n.push_back(std::string("branch.") + b + ".taken");
      n.push_back(std::string("branch.") + b + ".not_taken");
    }
    for (int i = 1; i <= 3; ++i) n.push_back("squash." + std::to_string(i));
    n.push_back("streak.2");
    n.push_back("streak.3");
    for (size_t i = 0; i < kMemWords; ++i) n.push_back("ld.addr" + std::to_string(i));
    for (size_t i = 0; i < kMemWords; ++i) n.push_back("st.addr" + std::to_string(i));
    for (int i = 0; i < 6; ++i) n.push_back("csr.read" + std::to_string(i));
    for (int i = 0; i < 6; ++i) n.push_back("csr.write" + std::to_string(i));
    n.push_back("trap.illegal_csr");
    n.push_back("trap.pc_range");
    n.push_back("trap.protected_store");
    n.push_back("trap.double");
    n.push_back("trap.return");
    n.push_back("key.hit");
    for (size_t i = 0; i < kUnlockSteps; ++i) n.push_back("key.miss_at" + std::to_string(i));
    for (size_t i = 1; i <= kUnlockSteps; ++i) n.push_back("unlock.step" + std::to_string(i));
    n.push_back("priv.csr.read6");
    n.push_back("priv.csr.read7");
    n.push_back("priv.csr.write6");
    n.push_back("priv.csr.write7");
    n.push_back("priv.halt");
    for (size_t i = 0; i < kMemWords; ++i) n.push_back("secure.ld" + std::to_string(i));
    for (size_t i = 0; i < kMemWords; ++i) n.push_back("secure.st" + std::to_string(i));
    for (int i = 0; i < 32; ++i) n.push_back("acc.msb" + std::to_string(i));
    n.push_back("hazard.st_ld");
    n.push_back("hazard.st_ld.same_addr");
    n.push_back("halt.ignored_input");
    return n;
  }

  uint32_t acc_ = 0;
  uint32_t pc_ = 0;
  std::array<uint32_t, kMemWords> mem_{};
  std::array<uint32_t, kMemWords> secure_{};
  std::array<uint32_t, 8> csr_{};
  unsigned squash_ = 0;
  unsigned streak_ = 0;
  size_t unlock_step_ = 0;
  bool privileged_ = false;
  bool in_trap_ = false;
  bool halted_ = false;
  // Address of a privileged store in the previous instruction, else -1.
  int last_secure_store_ = -1;
};

}  // namespace hwfuzz::duts

#endif  // HWFUZZ_DUTS_TOY_CPU_HPP_
