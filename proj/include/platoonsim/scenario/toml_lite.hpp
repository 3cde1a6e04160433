// Copyright 2026 The platoonsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace platoonsim::scenario {

// Parser for the subset of TOML the scenario format uses: [table] and
// [[array-of-tables]] headers, key = value lines with string / number /
// boolean values, and # comments. Line numbers are kept so validation can
// point at the offending input.

struct TomlValue {
  enum class Kind { String, Number, Boolean };
  Kind kind = Kind::Number;
  std::string str;
  double num = 0.0;
  bool boolean = false;
  int line = 0;
};

struct TomlTable {
  std::map<std::string, TomlValue> values;
  int line = 0;

  const TomlValue* find(const std::string& key) const {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  }
};

struct TomlDocument {
  TomlTable root;  // keys before the first header
  std::map<std::string, TomlTable> tables;
  std::map<std::string, std::vector<TomlTable>> arrays;

  const TomlTable* table(const std::string& name) const {
    auto it = tables.find(name);
    return it == tables.end() ? nullptr : &it->second;
  }
};

class TomlParseError : public std::runtime_error {
 public:
  TomlParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

TomlDocument parse_toml(const std::string& text);

TomlDocument parse_toml_file(const std::string& path);

}  // namespace platoonsim::scenario
