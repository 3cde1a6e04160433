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

#include <stdexcept>
#include <string>

#include "platoonsim/bridge/message.hpp"

namespace platoonsim::bridge {

/// Raised by decode()/frame parsing; `code` is the wire error code the
/// offended side reports before closing the session.
class CodecError : public std::runtime_error {
 public:
  CodecError(std::string code, const std::string& detail)
      : std::runtime_error(detail), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Canonical text encoding of one message: fixed field order, full
/// round-trip decimal for doubles. decode(encode(m)) == m for every valid
/// message.
std::string encode(const Message& message);

Message decode(const std::string& payload);

/// Length-prefixed framing: 4-byte big-endian payload byte count, then the
/// payload. frame()/unframe() work on byte strings so they can be tested
/// without sockets.
std::string frame(const std::string& payload);

/// Parses one frame starting at `offset`; advances `offset` past it.
/// Returns false if the buffer holds less than one complete frame.
bool unframe(const std::string& buffer, std::size_t& offset,
             std::string& payload_out);

}  // namespace platoonsim::bridge
