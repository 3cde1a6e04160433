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

#include "platoonsim/scenario/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace platoonsim::scenario {

namespace {

std::string strip(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Removes a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
      return false;
    }
  }
  return true;
}

TomlValue parse_value(const std::string& raw, int line) {
  TomlValue v;
  v.line = line;
  if (raw.empty()) throw TomlParseError(line, "missing value");

  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') {
      throw TomlParseError(line, "unterminated string");
    }
    v.kind = TomlValue::Kind::String;
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      char c = raw[i];
      if (c == '\\' && i + 2 < raw.size()) {
        char n = raw[i + 1];
        if (n == '"' || n == '\\') {
          out.push_back(n);
          ++i;
          continue;
        }
      }
      out.push_back(c);
    }
    v.str = out;
    return v;
  }
  if (raw == "true" || raw == "false") {
    v.kind = TomlValue::Kind::Boolean;
    v.boolean = raw == "true";
    return v;
  }
  double num = 0.0;
  const char* begin = raw.data();
  const char* end = raw.data() + raw.size();
  auto [ptr, ec] = std::from_chars(begin, end, num);
  if (ec != std::errc() || ptr != end) {
    throw TomlParseError(line, "cannot parse value '" + raw + "'");
  }
  v.kind = TomlValue::Kind::Number;
  v.num = num;
  return v;
}

}  // namespace

TomlDocument parse_toml(const std::string& text) {
  TomlDocument doc;
  TomlTable* current = &doc.root;

  std::istringstream in(text);
  std::string rawline;
  int lineno = 0;
  while (std::getline(in, rawline)) {
    ++lineno;
    const std::string line = strip(strip_comment(rawline));
    if (line.empty()) continue;

    if (line.front() == '[') {
      const bool is_array = line.size() > 1 && line[1] == '[';
      const std::string closer = is_array ? "]]" : "]";
      if (line.size() < closer.size() + (is_array ? 2 : 1) ||
          line.substr(line.size() - closer.size()) != closer) {
        throw TomlParseError(lineno, "malformed table header");
      }
      const std::string name = strip(line.substr(
          is_array ? 2 : 1, line.size() - (is_array ? 4 : 2)));
      if (!valid_key(name)) {
        throw TomlParseError(lineno, "bad table name '" + name + "'");
      }
      if (is_array) {
        doc.arrays[name].push_back(TomlTable{{}, lineno});
        current = &doc.arrays[name].back();
      } else {
        if (doc.tables.count(name)) {
          throw TomlParseError(lineno, "duplicate table [" + name + "]");
        }
        doc.tables[name] = TomlTable{{}, lineno};
        current = &doc.tables[name];
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw TomlParseError(lineno, "expected key = value");
    }
    const std::string key = strip(line.substr(0, eq));
    if (!valid_key(key)) {
      throw TomlParseError(lineno, "bad key '" + key + "'");
    }
    if (current->values.count(key)) {
      throw TomlParseError(lineno, "duplicate key '" + key + "'");
    }
    current->values[key] = parse_value(strip(line.substr(eq + 1)), lineno);
  }
  return doc;
}

TomlDocument parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw TomlParseError(0, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_toml(buf.str());
}

}  // namespace platoonsim::scenario
