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

#ifndef HWFUZZ_ERROR_HPP_
#define HWFUZZ_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace hwfuzz {

// A caller broke a documented precondition (length mismatch, empty corpus,
// zero coverpoints, ...). These indicate bugs in the caller, not bad data.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A corpus directory or file could not be read or written.
class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A DUT failed to run: broken pipe, timeout, malformed reply.
class DutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration or template table.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hwfuzz

#endif  // HWFUZZ_ERROR_HPP_
