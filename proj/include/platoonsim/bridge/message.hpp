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

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "platoonsim/core/types.hpp"
#include "platoonsim/sim/corridor.hpp"

namespace platoonsim::bridge {

inline constexpr char kProtocolVersion[] = "1";

/// Payload byte budget; anything larger is an "oversize" protocol error.
inline constexpr std::uint32_t kMaxFrameBytes = 16u * 1024u * 1024u;

struct Hello {
  std::string protocol_version = kProtocolVersion;
  double dt_s = 0.1;
};

struct HelloAck {
  std::string protocol_version = kProtocolVersion;
};

struct QueryState {
  double t_s = 0.0;
};

struct State {
  double t_s = 0.0;
  std::vector<VehicleState> vehicles;
};

struct Apply {
  double t_s = 0.0;
  std::vector<CommandRecord> commands;
};

struct Step {
  double dt_s = 0.1;
};

struct Stepped {
  double t_s = 0.0;
};

/// Out-of-band simulator event. The only kind currently defined is
/// "insert_vehicle", carrying an InsertionEvent.
struct Event {
  std::string kind = "insert_vehicle";
  InsertionEvent insertion;
};

struct Error {
  std::string code;    // one of the codes in kErrorCodes
  std::string detail;
};

struct Bye {};

// Wire error codes.
inline constexpr char kErrVersion[] = "version";
inline constexpr char kErrOutOfPhase[] = "out-of-phase";
inline constexpr char kErrMalformed[] = "malformed";
inline constexpr char kErrUnknownTag[] = "unknown-tag";
inline constexpr char kErrInvalidState[] = "invalid-state";
inline constexpr char kErrOversize[] = "oversize";
inline constexpr char kErrInternal[] = "internal";

using Payload = std::variant<Hello, HelloAck, QueryState, State, Apply, Step,
                             Stepped, Event, Error, Bye>;

/// One protocol message: a per-direction monotonically increasing sequence
/// number plus the tagged payload.
struct Message {
  std::uint64_t seq = 0;
  Payload payload;
};

std::string tag_of(const Payload& payload);

}  // namespace platoonsim::bridge
