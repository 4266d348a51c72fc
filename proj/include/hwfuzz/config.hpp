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

// Flat "key = value" text files: one pair per line, '#' starts a comment.
// Used for campaign config files and campaign reports. Keys are normalized
// so that "max-iters" and "max_iters" name the same entry.

#ifndef HWFUZZ_CONFIG_HPP_
#define HWFUZZ_CONFIG_HPP_

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hwfuzz/error.hpp"

namespace hwfuzz {

inline std::string NormalizeKey(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

inline std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class KeyValueFile {
 public:
  static KeyValueFile Parse(std::istream& in, const std::string& origin) {
    KeyValueFile kv;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      line = Trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": expected 'key = value'");
      }
      const std::string key = NormalizeKey(Trim(line.substr(0, eq)));
      if (key.empty()) {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
      }
      kv.Set(key, Trim(line.substr(eq + 1)));
    }
    return kv;
  }

  static KeyValueFile Load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    return Parse(in, path);
  }

  void Set(const std::string& key, std::string value) {
    const std::string k = NormalizeKey(key);
    if (values_.find(k) == values_.end()) order_.push_back(k);
    values_[k] = std::move(value);
  }

  std::optional<std::string> Get(const std::string& key) const {
    auto it = values_.find(NormalizeKey(key));
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  std::string Require(const std::string& key, const std::string& origin) const {
    auto v = Get(key);
    if (!v) throw ConfigError(origin + ": missing key '" + key + "'");
    return *v;
  }

  const std::vector<std::string>& keys() const { return order_; }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
};

}  // namespace hwfuzz

#endif  // HWFUZZ_CONFIG_HPP_
