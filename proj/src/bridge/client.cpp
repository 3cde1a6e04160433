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

#include "platoonsim/bridge/client.hpp"

#include <cmath>

#include "platoonsim/bridge/codec.hpp"
#include "platoonsim/core/ops.hpp"

namespace platoonsim::bridge {

namespace {

[[noreturn]] void fault(const std::string& what) {
  throw SimError(SimErrorCode::CoSimFault, what);
}

}  // namespace

RemoteSimulatorHandle::RemoteSimulatorHandle(MessageSocket socket, double dt_s)
    : socket_(std::move(socket)) {
  clock_.dt_s = dt_s;
  clock_.step_index = 0;
}

RemoteSimulatorHandle::~RemoteSimulatorHandle() {
  if (socket_.valid()) {
    try {
      socket_.send(Message{next_seq_++, Bye{}});
    } catch (...) {
      // Best-effort goodbye.
    }
  }
}

Message RemoteSimulatorHandle::request(Payload payload) {
  socket_.send(Message{next_seq_++, std::move(payload)});
  std::optional<Message> reply;
  try {
    reply = socket_.receive();
  } catch (const CodecError& e) {
    // A garbled reply is reported to the peer per protocol, then treated as
    // a co-simulation fault locally.
    try {
      socket_.send(Message{next_seq_++, Error{e.code(), e.what()}});
    } catch (...) {
    }
    socket_.close();
    fault(std::string("protocol error in reply: ") + e.what());
  }
  if (!reply) fault("server closed the session");
  if (reply->seq <= last_server_seq_) {
    fault("server sequence number did not increase");
  }
  last_server_seq_ = reply->seq;
  if (const auto* err = std::get_if<Error>(&reply->payload)) {
    socket_.close();
    fault("server error [" + err->code + "]: " + err->detail);
  }
  return std::move(*reply);
}

State RemoteSimulatorHandle::expect_state(Message reply) const {
  State* state = std::get_if<State>(&reply.payload);
  if (!state) {
    fault("expected STATE reply, got " + tag_of(reply.payload));
  }
  return std::move(*state);
}

Snapshot RemoteSimulatorHandle::query_state(double t_s) {
  State state = expect_state(request(QueryState{t_s}));
  if (state.t_s != t_s) {
    fault("state time desynchronized from co-simulation clock");
  }
  // Wire contract: a STATE must decode to a valid snapshot. Reject and
  // close otherwise.
  auto violations = validate_snapshot(state.vehicles);
  if (!violations.empty()) {
    try {
      socket_.send(Message{next_seq_++,
                           Error{kErrInvalidState, violations.front().detail}});
    } catch (...) {
    }
    socket_.close();
    fault("invalid STATE from server: " + violations.front().detail);
  }
  Snapshot snap;
  snap.clock = clock_;
  snap.vehicles = std::move(state.vehicles);
  return snap;
}

void RemoteSimulatorHandle::apply_commands(
    const std::vector<CommandRecord>& commands) {
  expect_state(request(Apply{clock_.t_s(), commands}));
}

SimClock RemoteSimulatorHandle::step(double dt_s) {
  Message reply = request(Step{dt_s});
  const Stepped* stepped = std::get_if<Stepped>(&reply.payload);
  if (!stepped) {
    fault("expected STEPPED reply, got " + tag_of(reply.payload));
  }
  clock_.step_index += 1;
  if (stepped->t_s != clock_.t_s()) {
    fault("STEPPED time does not match the lockstep clock");
  }
  return clock_;
}

void RemoteSimulatorHandle::inject_event(const InsertionEvent& event) {
  expect_state(request(Event{"insert_vehicle", event}));
}

void RemoteSimulatorHandle::handshake() {
  Message reply = request(Hello{kProtocolVersion, clock_.dt_s});
  const HelloAck* ack = std::get_if<HelloAck>(&reply.payload);
  if (!ack) {
    fault("expected HELLO_ACK, got " + tag_of(reply.payload));
  }
  if (ack->protocol_version != kProtocolVersion) {
    fault("server speaks protocol version " + ack->protocol_version);
  }
}

std::unique_ptr<RemoteSimulatorHandle> connect(const std::string& host,
                                               int port, double dt_s,
                                               double timeout_s) {
  MessageSocket socket = connect_socket(host, port, timeout_s);
  auto handle = std::make_unique<RemoteSimulatorHandle>(std::move(socket),
                                                        dt_s);
  handle->handshake();
  return handle;
}

}  // namespace platoonsim::bridge
