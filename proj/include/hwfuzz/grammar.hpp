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

// Parametric generator: untyped chromosome bytes -> per-cycle DUT stimulus.
//
// translate() is total. Any byte sequence, including mutated garbage, maps to
// a well-formed stimulus whose every cycle is exactly the DUT's input width.
//
// raw-bits: each cycle consumes ceil(width/8) bytes, little-endian (byte 0
//   holds bits 0..7). Bits above the width are dropped and a trailing partial
//   group is zero-padded.
// transaction: a byte selects a template (modulo table size), the next
//   payload-bytes bytes fill it (zero-padded when the chromosome runs out),
//   and the template expands to its fixed number of cycles. Cycle c of a
//   transaction carries byte 0 = template index, byte 1 = c, then the
//   payload, zero-padded and masked to the width.

#ifndef HWFUZZ_GRAMMAR_HPP_
#define HWFUZZ_GRAMMAR_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hwfuzz/error.hpp"

namespace hwfuzz {

constexpr size_t BytesForBits(size_t bits) { return (bits + 7) / 8; }

struct TransactionTemplate {
  std::string name;
  size_t payload_bytes = 0;
  size_t cycles = 1;

  friend bool operator==(const TransactionTemplate&,
                         const TransactionTemplate&) = default;
};

enum class GrammarKind : uint8_t { kRawBits = 0, kTransaction = 1 };

inline const char* GrammarKindName(GrammarKind k) {
  return k == GrammarKind::kRawBits ? "raw-bits" : "transaction";
}

struct GrammarMode {
  GrammarKind kind = GrammarKind::kRawBits;
  // Indexed by opcode; only used in transaction mode.
  std::vector<TransactionTemplate> templates;

  static GrammarMode RawBits() { return {}; }
  static GrammarMode Transactions(std::vector<TransactionTemplate> table) {
    GrammarMode m{GrammarKind::kTransaction, std::move(table)};
    m.Validate();
    return m;
  }

  void Validate() const {
    if (kind != GrammarKind::kTransaction) return;
    if (templates.empty()) {
      throw ConfigError("transaction grammar needs a non-empty template table");
    }
    for (const auto& t : templates) {
      if (t.cycles == 0) {
        throw ConfigError("template '" + t.name + "' must expand to >= 1 cycle");
      }
    }
  }
};

// Parses "opcode-index<TAB>name<TAB>payload-bytes<TAB>cycles" lines. Blank
// lines and '#' comments are ignored. Indexes must cover 0..n-1 exactly once.
inline std::vector<TransactionTemplate> ParseTemplateTable(std::istream& in,
                                                           const std::string& origin) {
  std::map<size_t, TransactionTemplate> by_index;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    auto fail = [&](const std::string& why) {
      return ConfigError(origin + ":" + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 4) throw fail("expected 4 tab-separated fields");
    size_t index = 0, payload = 0, cycles = 0;
    try {
      index = std::stoul(fields[0]);
      payload = std::stoul(fields[2]);
      cycles = std::stoul(fields[3]);
    } catch (const std::exception&) {
      throw fail("non-numeric field");
    }
    if (fields[1].empty()) throw fail("empty template name");
    if (cycles == 0) throw fail("cycles must be >= 1");
    if (!by_index.emplace(index, TransactionTemplate{fields[1], payload, cycles}).second) {
      throw fail("duplicate opcode index " + std::to_string(index));
    }
  }
  std::vector<TransactionTemplate> table;
  for (auto& [index, t] : by_index) {
    if (index != table.size()) {
      throw ConfigError(origin + ": opcode indexes must be 0.." +
                        std::to_string(by_index.size() - 1) + " without gaps");
    }
    table.push_back(std::move(t));
  }
  if (table.empty()) throw ConfigError(origin + ": template table is empty");
  return table;
}

inline std::vector<TransactionTemplate> LoadTemplateTable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read template table " + path);
  return ParseTemplateTable(in, path);
}

inline void WriteTemplateTable(std::span<const TransactionTemplate> table,
                               std::ostream& out) {
  for (size_t i = 0; i < table.size(); ++i) {
    out << i << '\t' << table[i].name << '\t' << table[i].payload_bytes << '\t'
        << table[i].cycles << '\n';
  }
}

struct Transaction {
  size_t template_index = 0;
  std::vector<uint8_t> payload;
  size_t first_cycle = 0;
  size_t cycles = 0;
};

struct Stimulus {
  size_t width_bits = 1;
  GrammarKind kind = GrammarKind::kRawBits;
  uint64_t source_chromosome_id = 0;
  // cycles() * bytes_per_cycle() bytes, one little-endian group per cycle.
  std::vector<uint8_t> data;
  // Transaction mode only.
  std::vector<Transaction> transactions;

  size_t bytes_per_cycle() const { return BytesForBits(width_bits); }
  size_t cycles() const { return data.size() / bytes_per_cycle(); }
  std::span<const uint8_t> Cycle(size_t i) const {
    return std::span<const uint8_t>(data).subspan(i * bytes_per_cycle(),
                                                  bytes_per_cycle());
  }
};

namespace detail {

inline void MaskTopByte(std::span<uint8_t> group, size_t width_bits) {
  if (width_bits % 8 != 0) {
    group.back() &= static_cast<uint8_t>((1u << (width_bits % 8)) - 1);
  }
}

}  // namespace detail

inline Stimulus Translate(std::span<const uint8_t> bytes, size_t width_bits,
                          const GrammarMode& mode, uint64_t chromosome_id = 0) {
  if (width_bits == 0) throw ContractViolation("translate: width must be >= 1 bit");
  Stimulus s;
  s.width_bits = width_bits;
  s.kind = mode.kind;
  s.source_chromosome_id = chromosome_id;
  const size_t group = BytesForBits(width_bits);

  if (mode.kind == GrammarKind::kRawBits) {
    const size_t cycles = (bytes.size() + group - 1) / group;
    s.data.assign(cycles * group, 0);
    std::copy(bytes.begin(), bytes.end(), s.data.begin());
    for (size_t c = 0; c < cycles; ++c) {
      detail::MaskTopByte(std::span<uint8_t>(s.data).subspan(c * group, group),
                          width_bits);
    }
    return s;
  }

  const auto& table = mode.templates;
  if (table.empty()) {
    throw ContractViolation("translate: transaction mode with empty template table");
  }
  size_t pos = 0;
  while (pos < bytes.size()) {
    Transaction txn;
    txn.template_index = bytes[pos++] % table.size();
    const TransactionTemplate& t = table[txn.template_index];
    txn.payload.assign(t.payload_bytes, 0);
    for (size_t k = 0; k < t.payload_bytes && pos < bytes.size(); ++k) {
      txn.payload[k] = bytes[pos++];
    }
    txn.first_cycle = s.data.size() / group;
    txn.cycles = t.cycles;
    for (size_t c = 0; c < t.cycles; ++c) {
      const size_t base = s.data.size();
      s.data.resize(base + group, 0);
      std::span<uint8_t> word(s.data.data() + base, group);
      word[0] = static_cast<uint8_t>(txn.template_index);
      if (group > 1) word[1] = static_cast<uint8_t>(c);
      for (size_t k = 0; k < txn.payload.size() && 2 + k < group; ++k) {
        word[2 + k] = txn.payload[k];
      }
      detail::MaskTopByte(word, width_bits);
    }
    s.transactions.push_back(std::move(txn));
  }
  return s;
}

inline std::string HexBytes(std::span<const uint8_t> bytes, bool msb_first) {
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  if (msb_first) {
    for (size_t i = bytes.size(); i-- > 0;) out << std::setw(2) << int{bytes[i]};
  } else {
    for (uint8_t b : bytes) out << std::setw(2) << int{b};
  }
  return out.str();
}

// Human-readable listing: a header, then one line per cycle (raw-bits) or
// per transaction. `templates` supplies names in transaction mode.
inline std::string DecodeReport(const Stimulus& s,
                                std::span<const TransactionTemplate> templates = {}) {
  std::ostringstream out;
  out << "# stimulus chromosome=" << s.source_chromosome_id
      << " mode=" << GrammarKindName(s.kind) << " width=" << s.width_bits
      << " cycles=" << s.cycles() << "\n";
  if (s.kind == GrammarKind::kRawBits) {
    for (size_t c = 0; c < s.cycles(); ++c) {
      out << "cycle " << c << ": 0x" << HexBytes(s.Cycle(c), true) << "\n";
    }
    return out.str();
  }
  for (size_t t = 0; t < s.transactions.size(); ++t) {
    const Transaction& txn = s.transactions[t];
    const std::string name = txn.template_index < templates.size()
                                 ? templates[txn.template_index].name
                                 : "op" + std::to_string(txn.template_index);
    out << "txn " << t << " @" << txn.first_cycle << ": " << name;
    if (!txn.payload.empty()) out << " payload=" << HexBytes(txn.payload, false);
    out << " cycles=" << txn.cycles << "\n";
  }
  return out.str();
}

}  // namespace hwfuzz

#endif  // HWFUZZ_GRAMMAR_HPP_
