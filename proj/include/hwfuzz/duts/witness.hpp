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

// Hand-written stimuli for the bundled DUTs.
//
// Witness corpora reach every coverpoint of their DUT and double as a
// regression oracle for the models. Bundled seeds are the shallow starting
// corpora shipped under seeds/. Bug triggers reproduce each planted failure.

#ifndef HWFUZZ_DUTS_WITNESS_HPP_
#define HWFUZZ_DUTS_WITNESS_HPP_

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "hwfuzz/duts/periph_fsm.hpp"
#include "hwfuzz/duts/synth_delay.hpp"
#include "hwfuzz/duts/toy_cpu.hpp"
#include "hwfuzz/error.hpp"

namespace hwfuzz::duts {

using Bytes = std::vector<uint8_t>;

// Builds a toy-cpu chromosome one instruction at a time.
class CpuProgram {
 public:
  using Op = ToyCpu::Op;

  CpuProgram& I(Op op) {
    bytes_.push_back(op);
    return *this;
  }
  CpuProgram& I(Op op, uint8_t p) {
    bytes_.push_back(op);
    bytes_.push_back(p);
    return *this;
  }
  // Two-byte immediate, little-endian, sign-extended by the CPU.
  CpuProgram& Imm(Op op, uint16_t imm) {
    bytes_.push_back(op);
    bytes_.push_back(static_cast<uint8_t>(imm));
    bytes_.push_back(static_cast<uint8_t>(imm >> 8));
    return *this;
  }
  CpuProgram& Ldi(uint16_t v) { return Imm(ToyCpu::kLdi, v); }
  CpuProgram& CsrRead(uint8_t idx) { return I(ToyCpu::kCsr, idx); }
  CpuProgram& CsrWrite(uint8_t idx) { return I(ToyCpu::kCsr, static_cast<uint8_t>(8 | idx)); }
  CpuProgram& Nops(size_t n) {
    for (size_t i = 0; i < n; ++i) I(ToyCpu::kNop);
    return *this;
  }
  CpuProgram& Unlock() {
    for (uint8_t k : ToyCpu::kUnlockKey) I(ToyCpu::kKey, k);
    return *this;
  }

  const Bytes& bytes() const { return bytes_; }

 private:
  Bytes bytes_;
};

// Builds a periph-fsm chromosome one 64-bit cycle at a time.
class BusProgram {
 public:
  using Reg = PeriphFsm::Reg;

  BusProgram& Write(Reg r, uint8_t data, bool rx = true) {
    return Cycle(static_cast<uint8_t>(1 | 2 | (r << 2)), data, rx);
  }
  BusProgram& Read(Reg r, bool rx = true) { return Cycle(static_cast<uint8_t>(1 | (r << 2)), 0, rx); }
  BusProgram& Idle(size_t n, bool rx = true) {
    for (size_t i = 0; i < n; ++i) Cycle(0, 0, rx);
    return *this;
  }
  // Drives one frame on the external RX line, one bit per cycle (baud
  // divider 0). `parity` is appended when given; `stop` is the stop level.
  BusProgram& RxFrame(uint8_t data, int parity, bool stop) {
    Idle(1, false);
    for (int b = 0; b < 8; ++b) Idle(1, (data >> b) & 1);
    if (parity >= 0) Idle(1, parity != 0);
    Idle(1, stop);
    return Idle(2);
  }

  const Bytes& bytes() const { return bytes_; }

 private:
  BusProgram& Cycle(uint8_t ctl, uint8_t data, bool rx) {
    const uint8_t word[8] = {ctl, data, static_cast<uint8_t>(rx ? 1 : 0), 0, 0, 0, 0, 0};
    bytes_.insert(bytes_.end(), word, word + 8);
    return *this;
  }

  Bytes bytes_;
};

inline uint8_t OddParity(uint8_t v) {
  uint8_t p = 0;
  for (; v; v &= static_cast<uint8_t>(v - 1)) p ^= 1;
  return p;
}

// ---------------------------------------------------------------- toy-cpu

inline std::vector<Bytes> ToyCpuWitness() {
  using C = ToyCpu;
  std::vector<Bytes> out;

  // ALU writers and their result classes, carry, borrow, shifts.
  CpuProgram alu;
  alu.Ldi(0).Ldi(5).Ldi(0x8000);
  alu.Ldi(0).Imm(C::kAddi, 0).Imm(C::kAddi, 1).Ldi(0).Imm(C::kAddi, 0x8000);
  alu.Ldi(1).Imm(C::kAddi, 0xffff);
  alu.Ldi(5).Imm(C::kSubi, 5).Ldi(5).Imm(C::kSubi, 1).Ldi(0).Imm(C::kSubi, 1);
  alu.Ldi(0xffff).Imm(C::kAndi, 0).Ldi(0xffff).Imm(C::kAndi, 1).Ldi(0xffff).Imm(C::kAndi, 0x8000);
  alu.Ldi(0).Imm(C::kXori, 0).Imm(C::kXori, 1).Ldi(0).Imm(C::kXori, 0x8000);
  alu.Ldi(1);
  for (int i = 0; i < 31; ++i) alu.I(C::kShift, 1);   // walks the msb 0..31
  alu.I(C::kShift, 1);                                 // shifts out: zero
  alu.Ldi(0x8000).I(C::kShift, 32 | 31);               // right shift: pos
  alu.I(C::kHalt).I(C::kNop);
  out.push_back(alu.bytes());

  // Memory, CSRs and the trap paths.
  CpuProgram mem;
  mem.Ldi(7);
  for (uint8_t a = 0; a < 15; ++a) mem.I(C::kSt, a);
  mem.Ldi(0xffff).I(C::kSt, 2).I(C::kLd, 2).I(C::kLd, 1);
  for (uint8_t a = 0; a < 16; ++a) mem.I(C::kLd, a);
  mem.I(C::kLd, 15);  // zero
  mem.Ldi(0x8000).CsrWrite(2).CsrRead(2).CsrRead(3).Ldi(1).CsrWrite(4).CsrRead(4);
  for (uint8_t i = 0; i < 6; ++i) mem.CsrWrite(i).CsrRead(i);
  mem.I(C::kSt, 15);       // protected store
  mem.CsrRead(6);          // illegal csr while trapped: double trap
  mem.CsrWrite(0);         // trap return
  out.push_back(mem.bytes());

  // Branches, squashing, streaks, and leaving the PC window.
  CpuProgram br;
  br.I(C::kBeq, 0xf8);                    // taken at pc 1, offset -2
  br.Ldi(0).I(C::kBeq, 0).I(C::kBeq, 0).I(C::kBeq, 0);
  br.I(C::kBeq, 1).Nops(1).I(C::kBeq, 2).Nops(2).I(C::kBeq, 3).Nops(3);
  br.Ldi(1).I(C::kBeq, 0).I(C::kBne, 0).Ldi(0).I(C::kBne, 0);
  br.I(C::kBlt, 0).Ldi(0x8000).I(C::kBlt, 0);
  out.push_back(br.bytes());

  // Every key miss on the way to privileged mode, then the secure bank.
  CpuProgram key;
  for (uint8_t k : ToyCpu::kUnlockKey) {
    key.I(C::kKey, static_cast<uint8_t>((k + 1) & ToyCpu::kKeyMask));
    key.I(C::kKey, k);
  }
  key.Ldi(9);
  for (uint8_t a = 0; a < 16; ++a) key.I(C::kSt, a).I(C::kNop);
  for (uint8_t a = 0; a < 16; ++a) key.I(C::kLd, a);
  key.I(C::kSt, 3).I(C::kLd, 4).I(C::kSt, 5).I(C::kLd, 5);
  key.CsrRead(6).CsrRead(7).CsrWrite(6).CsrWrite(7);
  key.I(C::kHalt).I(C::kNop);
  out.push_back(key.bytes());
  return out;
}

// A privileged store to secure word 15 immediately followed by a load.
inline Bytes ToyCpuBugTrigger() {
  CpuProgram p;
  p.Unlock().Ldi(1).I(ToyCpu::kSt, 15).I(ToyCpu::kLd, 15);
  return p.bytes();
}

// Shallow starting programs: straight-line ALU and memory traffic, one
// branch and a single correct first key.
inline std::vector<Bytes> ToyCpuSeeds() {
  using C = ToyCpu;
  CpuProgram a;
  a.Ldi(3).Imm(C::kAddi, 4).I(C::kSt, 1).I(C::kLd, 1).Imm(C::kSubi, 2)
      .I(C::kBne, 0).I(C::kKey, ToyCpu::kUnlockKey[0]).I(C::kShift, 2)
      .Imm(C::kXori, 0x0f0f).I(C::kSt, 3).CsrRead(1).I(C::kKey, 0).I(C::kNop)
      .Ldi(0x0100).I(C::kLd, 3).I(C::kBeq, 0).I(C::kKey, 2).Imm(C::kAndi, 0x00ff);
  CpuProgram b;
  b.Ldi(0x1234).I(C::kSt, 4).I(C::kKey, 1).Imm(C::kAddi, 0x0101).I(C::kLd, 4)
      .CsrWrite(3).I(C::kKey, 3).I(C::kShift, 32 | 4).I(C::kNop).I(C::kBlt, 0)
      .Imm(C::kSubi, 0x10).I(C::kKey, 0).I(C::kSt, 5).CsrRead(3).I(C::kNop)
      .Ldi(2).I(C::kLd, 5).I(C::kKey, 1);
  return {a.bytes(), b.bytes()};
}

// -------------------------------------------------------------- periph-fsm

inline std::vector<Bytes> PeriphFsmWitness() {
  using P = PeriphFsm;
  std::vector<Bytes> out;

  // Register file, CTRL bits, baud classes, scratch patterns, FIFO limits.
  BusProgram regs;
  for (uint8_t r = 0; r < 8; ++r) regs.Read(static_cast<P::Reg>(r));
  regs.Write(P::kCtrl, 0xff).Write(P::kCtrl, 0);
  for (uint8_t d : {0, 1, 2, 4, 16, 0}) regs.Write(P::kBaud, d);
  for (uint8_t d : {0x00, 0xff, 0xa5}) regs.Write(P::kScratch, d);
  regs.Write(P::kStatus, 0).Write(P::kRegRxData, 0);
  for (int i = 0; i < 9; ++i) regs.Write(P::kRegTxData, static_cast<uint8_t>(i));
  regs.Write(P::kIrqMask, 0xf).Write(P::kCtrl, P::kIrqEn).Idle(1);
  regs.Write(P::kIrqStatus, 0xff);
  regs.Write(P::kCtrl, P::kFifoReset).Idle(1);
  out.push_back(regs.bytes());

  // Loopback frames with parity and two stop bits, every nibble value,
  // back-to-back transmission and a full RX FIFO.
  BusProgram loop;
  loop.Write(P::kIrqMask, 0xf);
  loop.Write(P::kCtrl, P::kTxEn | P::kRxEn | P::kParityEn | P::kLoopback | P::kTwoStop | P::kIrqEn);
  for (int v = 0; v < 16; ++v) {
    loop.Write(P::kRegTxData, static_cast<uint8_t>(v * 0x11));
    loop.Idle(3).Read(P::kStatus).Idle(12).Read(P::kStatus).Read(P::kRegRxData);
  }
  loop.Write(P::kRegTxData, 0x5a).Write(P::kRegTxData, 0xa5).Idle(30);
  loop.Read(P::kRegRxData).Read(P::kRegRxData);
  loop.Write(P::kRegTxData, 0x42).Idle(4);
  loop.Write(P::kCtrl, P::kTxEn | P::kBreakTx).Idle(4);
  out.push_back(loop.bytes());

  // External frames: good, bad parity, framing error, break, overrun.
  BusProgram rx;
  rx.Write(P::kIrqMask, 0xf).Write(P::kCtrl, P::kRxEn | P::kParityEn | P::kIrqEn);
  rx.RxFrame(0x81, OddParity(0x81), true);
  rx.RxFrame(0x81, !OddParity(0x81), true);
  rx.RxFrame(0x00, 0, false);
  rx.RxFrame(0xf0, OddParity(0xf0), true);
  rx.RxFrame(0x3c, OddParity(0x3c), true);
  rx.Write(P::kCtrl, P::kRxEn);
  rx.RxFrame(0xff, -1, true);
  rx.Write(P::kIrqStatus, 0x0f);
  out.push_back(rx.bytes());
  return out;
}

// Three loopback parity frames without draining RX.
inline Bytes PeriphFsmBugTrigger() {
  using P = PeriphFsm;
  BusProgram p;
  p.Write(P::kCtrl, P::kTxEn | P::kRxEn | P::kParityEn | P::kLoopback);
  for (int i = 0; i < 3; ++i) p.Write(P::kRegTxData, static_cast<uint8_t>(0x30 + i));
  p.Idle(45);
  return p.bytes();
}

// The known-good seed: configure, send two plain loopback frames, drain.
inline Bytes PeriphFsmKnownGood() {
  using P = PeriphFsm;
  BusProgram p;
  p.Write(P::kBaud, 0).Write(P::kScratch, 0x11);
  p.Write(P::kCtrl, P::kTxEn | P::kRxEn | P::kLoopback);
  p.Write(P::kRegTxData, 0x3c).Idle(12).Read(P::kRegRxData);
  p.Write(P::kRegTxData, 0x81).Idle(12).Read(P::kStatus).Read(P::kRegRxData);
  return p.bytes();
}

inline std::vector<Bytes> PeriphFsmSeeds() {
  using P = PeriphFsm;
  BusProgram idle;
  idle.Write(P::kScratch, 0x5a).Read(P::kScratch).Write(P::kBaud, 3).Read(P::kStatus);
  idle.Write(P::kCtrl, P::kRxEn).Idle(10);
  return {PeriphFsmKnownGood(), idle.bytes()};
}

// ------------------------------------------------------------- synth-delay

inline std::vector<Bytes> SynthDelayWitness(size_t coverpoints = SynthDelay::kDefaultCoverpoints) {
  Bytes all;
  for (size_t b = 0; b < coverpoints - 2 && b < 256; ++b) all.push_back(static_cast<uint8_t>(b));
  all.push_back(0xde);
  all.push_back(0xa1);
  return {all};
}

inline Bytes SynthDelayBugTrigger() { return {0x10, 0xde, 0xad, 0x20}; }

inline std::vector<Bytes> SynthDelaySeeds() {
  Bytes s(100);
  for (size_t i = 0; i < s.size(); ++i) s[i] = static_cast<uint8_t>(i * 7);
  return {s};
}

// ------------------------------------------------------------------ lookup

inline std::vector<Bytes> WitnessCorpus(const std::string& dut) {
  if (dut == "toy-cpu") return ToyCpuWitness();
  if (dut == "periph-fsm") return PeriphFsmWitness();
  if (dut == "synth-delay") return SynthDelayWitness();
  throw ConfigError("no witness corpus for DUT '" + dut + "'");
}

inline Bytes BugTrigger(const std::string& dut) {
  if (dut == "toy-cpu") return ToyCpuBugTrigger();
  if (dut == "periph-fsm") return PeriphFsmBugTrigger();
  if (dut == "synth-delay") return SynthDelayBugTrigger();
  throw ConfigError("no bug trigger for DUT '" + dut + "'");
}

inline std::vector<Bytes> BundledSeeds(const std::string& dut) {
  if (dut == "toy-cpu") return ToyCpuSeeds();
  if (dut == "periph-fsm") return PeriphFsmSeeds();
  if (dut == "synth-delay") return SynthDelaySeeds();
  throw ConfigError("no bundled seeds for DUT '" + dut + "'");
}

}  // namespace hwfuzz::duts

#endif  // HWFUZZ_DUTS_WITNESS_HPP_
