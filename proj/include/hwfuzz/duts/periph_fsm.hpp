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

// periph-fsm: a UART-style peripheral behind a small register bus.
//
// Per-cycle input (64 bits, little-endian):
//   bit 0      bus request valid
//   bit 1      write (else read)
//   bits 2-4   register address
//   bits 8-15  write data
//   bit 16     external RX line level
//
// Registers: 0 CTRL, 1 STATUS (read-only), 2 TXDATA, 3 RXDATA, 4 BAUD,
// 5 IRQ_MASK, 6 IRQ_STATUS (write 1 to clear), 7 SCRATCH.
// CTRL bits: 0 tx_en, 1 rx_en, 2 parity_en, 3 loopback, 4 irq_en,
// 5 two_stop, 6 break_tx, 7 fifo_reset (self-clearing).
//
// The TX and RX state machines advance on baud ticks. In loopback the RX
// line follows the TX line, so completing a loopback frame takes a CTRL write,
// a TXDATA push and a dozen further cycles without disturbing CTRL.
//
// Planted bug: an RX overrun of a loopback frame while parity is enabled
// corrupts the RX FIFO write pointer, which the check detects.

#ifndef HWFUZZ_DUTS_PERIPH_FSM_HPP_
#define HWFUZZ_DUTS_PERIPH_FSM_HPP_

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hwfuzz/dut.hpp"

namespace hwfuzz::duts {

class PeriphFsm final : public InstrumentedDut {
 public:
  static constexpr size_t kInputWidth = 64;
  static constexpr size_t kTxDepth = 8;
  static constexpr size_t kRxDepth = 2;

  enum Reg : uint8_t { kCtrl, kStatus, kRegTxData, kRegRxData, kBaud, kIrqMask, kIrqStatus, kScratch };
  enum CtrlBit : uint8_t {
    kTxEn = 1, kRxEn = 2, kParityEn = 4, kLoopback = 8,
    kIrqEn = 16, kTwoStop = 32, kBreakTx = 64, kFifoReset = 128
  };
  enum IrqCause : uint8_t { kIrqTxEmpty, kIrqRxAvail, kIrqError, kIrqOverflow };
  enum TxState : uint8_t { kTxIdle, kTxStart, kTxData, kTxParity, kTxStop, kTxStop2 };
  enum RxState : uint8_t { kRxIdle, kRxStart, kRxData, kRxParity, kRxStop };

  // Coverpoint layout.
  static constexpr size_t kRegWrite = 0;                    // 8
  static constexpr size_t kRegRead = kRegWrite + 8;         // 8
  static constexpr size_t kCtrlSet = kRegRead + 8;          // 8
  static constexpr size_t kTxLevel = kCtrlSet + 8;          // levels 1..8
  static constexpr size_t kTxOverflow = kTxLevel + kTxDepth;
  static constexpr size_t kRxLevel = kTxOverflow + 1;       // levels 1..2
  static constexpr size_t kRxUnderflow = kRxLevel + kRxDepth;
  static constexpr size_t kFifoResetPt = kRxUnderflow + 1;
  static constexpr size_t kTxEnter = kFifoResetPt + 1;      // start, data, parity, stop, stop2
  static constexpr size_t kTxBitOne = kTxEnter + 5;         // 8
  static constexpr size_t kTxFrameDone = kTxBitOne + 8;
  static constexpr size_t kTxBackToBack = kTxFrameDone + 1;
  static constexpr size_t kTxBreakMidFrame = kTxBackToBack + 1;
  static constexpr size_t kRxStartPt = kTxBreakMidFrame + 1;
  static constexpr size_t kRxStartFull = kRxStartPt + 1;
  static constexpr size_t kRxBitOne = kRxStartFull + 1;        // 8
  static constexpr size_t kRxParityOk = kRxBitOne + 8;
  static constexpr size_t kRxParityErr = kRxParityOk + 1;
  static constexpr size_t kRxFrameOk = kRxParityErr + 1;
  static constexpr size_t kRxFramingErr = kRxFrameOk + 1;
  static constexpr size_t kRxBreak = kRxFramingErr + 1;
  static constexpr size_t kRxOverrun = kRxBreak + 1;
  static constexpr size_t kRxHighNibble = kRxOverrun + 1;   // 16
  static constexpr size_t kLoopFrame = kRxHighNibble + 16;
  static constexpr size_t kLoopEcho = kLoopFrame + 1;
  static constexpr size_t kLoopParity = kLoopEcho + 1;
  static constexpr size_t kLoopTwoStop = kLoopParity + 1;
  static constexpr size_t kLoopFull = kLoopTwoStop + 1;
  static constexpr size_t kLoopLowNibble = kLoopFull + 1;  // 16
  static constexpr size_t kIrqRaised = kLoopLowNibble + 16;   // 4
  static constexpr size_t kIrqLine = kIrqRaised + 4;          // 4
  static constexpr size_t kIrqCleared = kIrqLine + 4;
  static constexpr size_t kBaudClass = kIrqCleared + 1;       // 5
  static constexpr size_t kScratchPattern = kBaudClass + 5;   // 00, ff, a5
  static constexpr size_t kStatusBusy = kScratchPattern + 3;
  static constexpr size_t kStatusRxAvail = kStatusBusy + 1;
  static constexpr size_t kRxReadWhenFull = kStatusRxAvail + 1;
  static constexpr size_t kCoverpoints = kRxReadWhenFull + 1;

  static DutDescriptor Descriptor() {
    return {"periph-fsm", kInputWidth, kCoverpoints, GrammarMode::RawBits(), 0};
  }

  PeriphFsm() : InstrumentedDut(Descriptor()) {
    names_ = MakeNames();
    Reset();
  }

  void Step(std::span<const uint8_t> in) override {
    const bool valid = in[0] & 1;
    const bool write = in[0] & 2;
    const auto addr = static_cast<Reg>((in[0] >> 2) & 7);
    const uint8_t wdata = in[1];
    const bool ext_rx = in[2] & 1;

    if (valid) BusAccess(addr, write, wdata);

    if (baud_count_ >= baud_div_) {
      baud_count_ = 0;
      TxTick();
      RxTick((ctrl_ & kLoopback) ? tx_line_ : ext_rx);
    } else {
      ++baud_count_;
    }
    UpdateIrq();
  }

 protected:
  void ResetState() override {
    ctrl_ = 0;
    baud_div_ = 0;
    baud_count_ = 0;
    irq_mask_ = 0;
    irq_status_ = 0;
    scratch_ = 0;
    tx_fifo_ = {};
    tx_count_ = 0;
    rx_fifo_ = {};
    rx_count_ = 0;
    rx_wptr_ = 0;
    tx_state_ = kTxIdle;
    tx_shift_ = 0;
    tx_bit_ = 0;
    tx_line_ = true;
    tx_current_ = 0;
    tx_frames_ = 0;
    rx_state_ = kRxIdle;
    rx_shift_ = 0;
    rx_bit_ = 0;
    rx_parity_bad_ = false;
  }

 private:
  void BusAccess(Reg addr, bool write, uint8_t wdata) {
    Cover((write ? kRegWrite : kRegRead) + addr);
    if (!write) {
      switch (addr) {
        case kStatus:
          CoverIf(tx_state_ != kTxIdle, kStatusBusy);
          CoverIf(rx_count_ > 0, kStatusRxAvail);
          break;
        case kRegRxData:
          if (rx_count_ == 0) {
            Cover(kRxUnderflow);
          } else {
            CoverIf(rx_count_ == kRxDepth, kRxReadWhenFull);
            for (size_t i = 1; i < rx_count_; ++i) rx_fifo_[i - 1] = rx_fifo_[i];
            --rx_count_;
            rx_wptr_ = rx_count_;
          }
          break;
        default:
          break;
      }
      return;
    }
    switch (addr) {
      case kCtrl:
        for (int b = 0; b < 8; ++b) CoverIf(wdata & (1 << b), kCtrlSet + b);
        if (wdata & kFifoReset) {
          Cover(kFifoResetPt);
          tx_count_ = 0;
          rx_count_ = 0;
          rx_wptr_ = 0;
        }
        if ((wdata & kBreakTx) && tx_state_ != kTxIdle) Cover(kTxBreakMidFrame);
        ctrl_ = wdata & static_cast<uint8_t>(~kFifoReset);
        break;
      case kRegTxData:
        if (tx_count_ == kTxDepth) {
          Cover(kTxOverflow);
          Raise(kIrqOverflow);
        } else {
          tx_fifo_[tx_count_++] = wdata;
          Cover(kTxLevel + tx_count_ - 1);
        }
        break;
      case kBaud:
        baud_div_ = wdata;
        Cover(kBaudClass + (wdata == 0 ? 0 : wdata == 1 ? 1 : wdata < 4 ? 2 : wdata < 16 ? 3 : 4));
        break;
      case kIrqMask:
        irq_mask_ = wdata & 0xf;
        break;
      case kIrqStatus:
        if (irq_status_ & wdata) Cover(kIrqCleared);
        irq_status_ &= static_cast<uint8_t>(~wdata);
        break;
      case kScratch:
        scratch_ = wdata;
        CoverIf(wdata == 0x00, kScratchPattern + 0);
        CoverIf(wdata == 0xff, kScratchPattern + 1);
        CoverIf(wdata == 0xa5, kScratchPattern + 2);
        break;
      default:
        break;
    }
  }

  void TxTick() {
    if (ctrl_ & kBreakTx) {
      tx_line_ = false;
      return;
    }
    switch (tx_state_) {
      case kTxIdle:
        tx_line_ = true;
        if ((ctrl_ & kTxEn) && tx_count_ > 0) StartFrame();
        break;
      case kTxStart:
        Enter(kTxData);
        tx_bit_ = 0;
        SendDataBit();
        break;
      case kTxData:
        if (tx_bit_ < 8) {
          SendDataBit();
        } else if (ctrl_ & kParityEn) {
          Enter(kTxParity);
          tx_line_ = std::popcount(tx_current_) & 1;
        } else {
          Enter(kTxStop);
          tx_line_ = true;
        }
        break;
      case kTxParity:
        Enter(kTxStop);
        tx_line_ = true;
        break;
      case kTxStop:
        if (ctrl_ & kTwoStop) {
          Enter(kTxStop2);
          tx_line_ = true;
          break;
        }
        FinishFrame();
        break;
      case kTxStop2:
        FinishFrame();
        break;
    }
  }

  void StartFrame() {
    tx_current_ = tx_fifo_[0];
    for (size_t i = 1; i < tx_count_; ++i) tx_fifo_[i - 1] = tx_fifo_[i];
    --tx_count_;
    tx_shift_ = tx_current_;
    Enter(kTxStart);
    tx_line_ = false;
  }

  void SendDataBit() {
    tx_line_ = tx_shift_ & 1;
    CoverIf(tx_line_, kTxBitOne + tx_bit_);
    tx_shift_ >>= 1;
    ++tx_bit_;
  }

  void FinishFrame() {
    Cover(kTxFrameDone);
    ++tx_frames_;
    tx_line_ = true;
    if (tx_count_ == 0) Raise(kIrqTxEmpty);
    if ((ctrl_ & kTxEn) && tx_count_ > 0) {
      Cover(kTxBackToBack);
      StartFrame();
    } else {
      tx_state_ = kTxIdle;
    }
  }

  void Enter(TxState s) {
    tx_state_ = s;
    Cover(kTxEnter + (s - kTxStart));
  }

  void RxTick(bool line) {
    if (!(ctrl_ & kRxEn)) {
      rx_state_ = kRxIdle;
      return;
    }
    switch (rx_state_) {
      case kRxIdle:
        if (!line) {
          CoverIf(rx_count_ == kRxDepth, kRxStartFull);
          rx_state_ = kRxStart;
        }
        break;
      case kRxStart:
        // Start bit confirmed by the first data sample window.
        Cover(kRxStartPt);
        rx_state_ = kRxData;
        rx_shift_ = 0;
        rx_bit_ = 0;
        rx_parity_bad_ = false;
        [[fallthrough]];
      case kRxData:
        if (rx_state_ == kRxData && rx_bit_ < 8) {
          if (line) {
            rx_shift_ |= static_cast<uint8_t>(1u << rx_bit_);
            Cover(kRxBitOne + rx_bit_);
          }
          ++rx_bit_;
          if (rx_bit_ == 8) rx_state_ = (ctrl_ & kParityEn) ? kRxParity : kRxStop;
        }
        break;
      case kRxParity: {
        const bool expected = std::popcount(rx_shift_) & 1;
        rx_parity_bad_ = (line != expected);
        Cover(rx_parity_bad_ ? kRxParityErr : kRxParityOk);
        if (rx_parity_bad_) Raise(kIrqError);
        rx_state_ = kRxStop;
        break;
      }
      case kRxStop:
        rx_state_ = kRxIdle;
        if (!line) {
          Cover(kRxFramingErr);
          if (rx_shift_ == 0) Cover(kRxBreak);
          Raise(kIrqError);
          break;
        }
        ReceiveFrame();
        break;
    }
  }

  void ReceiveFrame() {
    Cover(kRxFrameOk);
    Cover(kRxHighNibble + (rx_shift_ >> 4));
    const bool loop = ctrl_ & kLoopback;
    if (loop) {
      Cover(kLoopFrame);
      CoverIf(rx_shift_ == tx_current_, kLoopEcho);
      CoverIf(ctrl_ & kParityEn, kLoopParity);
      CoverIf(ctrl_ & kTwoStop, kLoopTwoStop);
      Cover(kLoopLowNibble + (rx_shift_ & 0xf));
    }
    if (rx_count_ == kRxDepth) {
      Cover(kRxOverrun);
      Raise(kIrqError);
      if (loop && (ctrl_ & kParityEn)) {
        ++rx_wptr_;
        if (rx_wptr_ > kRxDepth) Fail("RX FIFO write pointer overran its storage");
      }
      return;
    }
    rx_fifo_[rx_count_++] = rx_shift_;
    rx_wptr_ = rx_count_;
    Cover(kRxLevel + rx_count_ - 1);
    CoverIf(loop && rx_count_ == kRxDepth, kLoopFull);
    Raise(kIrqRxAvail);
  }

  void Raise(IrqCause cause) {
    Cover(kIrqRaised + cause);
    irq_status_ |= static_cast<uint8_t>(1u << cause);
  }

  void UpdateIrq() {
    if (!(ctrl_ & kIrqEn)) return;
    const uint8_t active = irq_status_ & irq_mask_;
    for (int c = 0; c < 4; ++c) CoverIf(active & (1 << c), kIrqLine + c);
  }

  static std::vector<std::string> MakeNames() {
    static const char* kRegs[] = {"ctrl", "status", "txdata", "rxdata",
                                  "baud", "irq_mask", "irq_status", "scratch"};
    static const char* kCtrl[] = {"tx_en", "rx_en", "parity_en", "loopback",
                                  "irq_en", "two_stop", "break_tx", "fifo_reset"};
    static const char* kCauses[] = {"tx_empty", "rx_avail", "error", "overflow"};
    std::vector<std::string> n;
    for (auto* r : kRegs) n.push_back(std::string("bus.write.") + r);
    for (auto* r : kRegs) n.push_back(std::string("bus.read.") + r);
    for (auto* c : kCtrl) n.push_back(std::string("ctrl.set.") + c);
    for (size_t i = 1; i <= kTxDepth; ++i) n.push_back("txfifo.level" + std::to_string(i));
    n.push_back("txfifo.overflow");
    for (size_t i = 1; i <= kRxDepth; ++i) n.push_back("rxfifo.level" + std::to_string(i));
    n.push_back("rxfifo.underflow");
    n.push_back("fifo.reset");
    for (auto* s : {"start", "data", "parity", "stop", "stop2"}) {
      n.push_back(std::string("tx.enter.") + s);
    }
    for (int i = 0; i < 8; ++i) n.push_back("tx.bit" + std::to_string(i) + ".one");
    n.push_back("tx.frame_done");
    n.push_back("tx.back_to_back");
    n.push_back("tx.break_mid_frame");
    n.push_back("rx.start");
    n.push_back("rx.start_when_full");
    for (int i = 0; i < 8; ++i) n.push_back("rx.bit" + std::to_string(i) + ".one");
    n.push_back("rx.parity_ok");
    n.push_back("rx.parity_error");
    n.push_back("rx.frame_ok");
    n.push_back("rx.framing_error");
    n.push_back("rx.break");
    n.push_back("rx.overrun");
    for (int i = 0; i < 16; ++i) n.push_back("rx.high_nibble" + std::to_string(i));
    n.push_back("loop.frame");
    n.push_back("loop.echo");
    n.push_back("loop.parity");
    n.push_back("loop.two_stop");
    n.push_back("loop.rxfifo_full");
    for (int i = 0; i < 16; ++i) n.push_back("loop.low_nibble" + std::to_string(i));
    for (auto* c : kCauses) n.push_back(std::string("irq.raised.") + c);
    for (auto* c : kCauses) n.push_back(std::string("irq.line.") + c);
    n.push_back("irq.cleared");
    for (auto* b : {"div0", "div1", "div2_3", "div4_15", "div16plus"}) {
      n.push_back(std::string("baud.") + b);
    }
    for (auto* s : {"00", "ff", "a5"}) n.push_back(std::string("scratch.") + s);
    n.push_back("status.tx_busy");
    n.push_back("status.rx_avail");
    n.push_back("rxfifo.read_when_full");
    return n;
  }

  uint8_t ctrl_ = 0;
  uint8_t baud_div_ = 0;
  uint16_t baud_count_ = 0;
  uint8_t irq_mask_ = 0;
  uint8_t irq_status_ = 0;
  uint8_t scratch_ = 0;
  std::array<uint8_t, kTxDepth> tx_fifo_{};
  size_t tx_count_ = 0;
  std::array<uint8_t, kRxDepth> rx_fifo_{};
  size_t rx_count_ = 0;
  size_t rx_wptr_ = 0;
  TxState tx_state_ = kTxIdle;
  uint8_t tx_shift_ = 0;
  unsigned tx_bit_ = 0;
  bool tx_line_ = true;
  uint8_t tx_current_ = 0;
  uint32_t tx_frames_ = 0;
  RxState rx_state_ = kRxIdle;
  uint8_t rx_shift_ = 0;
  unsigned rx_bit_ = 0;
  bool rx_parity_bad_ = false;
};

}  // namespace hwfuzz::duts

#endif  // HWFUZZ_DUTS_PERIPH_FSM_HPP_
