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

#include "platoonsim/bridge/server.hpp"

#include <sys/socket.h>

#include <iostream>

#include "platoonsim/bridge/codec.hpp"
#include "platoonsim/core/ops.hpp"

namespace platoonsim::bridge {

namespace {

const char* map_sim_error(SimErrorCode code) {
  switch (code) {
    case SimErrorCode::ClockMismatch:
      return kErrOutOfPhase;
    case SimErrorCode::UnknownVehicle:
    case SimErrorCode::ManualVehicle:
    case SimErrorCode::InvalidState:
    case SimErrorCode::BadStepSize:
      return kErrInvalidState;
    case SimErrorCode::CoSimFault:
      return kErrInternal;
  }
  return kErrInternal;
}

}  // namespace

BridgeServer::BridgeServer(SimulatorFactory factory, ServerConfig config)
    : factory_(std::move(factory)),
      config_(config),
      listener_(config.host, config.port) {}

void BridgeServer::serve() {
  int session_count = 0;
  while (!stopping_.load()) {
    MessageSocket client = listener_.accept_client();
    if (!client.valid()) break;  // listener shut down
    run_session(std::move(client));
    ++session_count;
    if (config_.max_sessions > 0 && session_count >= config_.max_sessions) {
      break;
    }
  }
}

void BridgeServer::stop() {
  stopping_.store(true);
  listener_.shutdown();
  const int fd = session_fd_.load();
  if (fd >= 0) ::shutdown(fd, SHUT_RDWR);  // unblock an active session
}

void BridgeServer::run_session(MessageSocket socket) {
  session_fd_.store(socket.fd());
  // Fresh simulator per session: a reconnecting client must observe
  // scenario time zero again.
  std::unique_ptr<SimulatorHandle> sim = factory_();
  SessionPhase phase = SessionPhase::AwaitHello;
  std::uint64_t next_reply_seq = 1;
  std::uint64_t last_client_seq = 0;

  auto reply = [&](Payload payload) {
    socket.send(Message{next_reply_seq++, std::move(payload)});
  };
  auto reply_error_and_close = [&](const std::string& code,
                                   const std::string& detail) {
    try {
      reply(Error{code, detail});
    } catch (const SimError&) {
      // Peer already gone; nothing to report to.
    }
    phase = SessionPhase::Closed;
  };

  while (phase != SessionPhase::Closed) {
    std::optional<Message> msg;
    try {
      msg = socket.receive();
    } catch (const CodecError& e) {
      reply_error_and_close(e.code(), e.what());
      break;
    } catch (const SimError& e) {
      std::cerr << "[bridge] session transport fault: " << e.what() << "\n";
      break;
    }
    if (!msg) break;  // orderly disconnect

    if (msg->seq <= last_client_seq) {
      reply_error_and_close(kErrMalformed,
                            "sequence number did not increase");
      break;
    }
    last_client_seq = msg->seq;

    if (std::holds_alternative<Bye>(msg->payload)) {
      phase = SessionPhase::Closed;
      break;
    }

    if (phase == SessionPhase::AwaitHello) {
      const Hello* hello = std::get_if<Hello>(&msg->payload);
      if (!hello) {
        reply_error_and_close(kErrOutOfPhase,
                              tag_of(msg->payload) + " before HELLO");
        break;
      }
      if (hello->protocol_version != kProtocolVersion) {
        reply_error_and_close(kErrVersion, "unsupported protocol version " +
                                               hello->protocol_version);
        break;
      }
      if (hello->dt_s != config_.dt_s) {
        reply_error_and_close(kErrVersion, "dt mismatch: server runs dt=" +
                                               std::to_string(config_.dt_s));
        break;
      }
      reply(HelloAck{});
      phase = SessionPhase::Ready;
      continue;
    }

    // Ready phase: QUERY_STATE / APPLY / STEP / EVENT.
    try {
      if (const auto* q = std::get_if<QueryState>(&msg->payload)) {
        Snapshot snap = sim->query_state(q->t_s);
        reply(State{snap.clock.t_s(), std::move(snap.vehicles)});
      } else if (const auto* a = std::get_if<Apply>(&msg->payload)) {
        sim->apply_commands(a->commands);
        Snapshot snap = sim->query_state(sim->clock().t_s());
        reply(State{snap.clock.t_s(), std::move(snap.vehicles)});
      } else if (const auto* s = std::get_if<Step>(&msg->payload)) {
        const SimClock clk = sim->step(s->dt_s);
        reply(Stepped{clk.t_s()});
      } else if (const auto* e = std::get_if<Event>(&msg->payload)) {
        sim->inject_event(e->insertion);
        Snapshot snap = sim->query_state(sim->clock().t_s());
        reply(State{snap.clock.t_s(), std::move(snap.vehicles)});
      } else {
        reply_error_and_close(kErrOutOfPhase, tag_of(msg->payload) +
                                                  " not legal in Ready phase");
      }
    } catch (const SimError& e) {
      reply_error_and_close(map_sim_error(e.code()), e.what());
    } catch (const std::exception& e) {
      reply_error_and_close(kErrInternal, e.what());
    }
  }
  session_fd_.store(-1);
}

void serve(SimulatorFactory factory, const ServerConfig& config) {
  BridgeServer server(std::move(factory), config);
  server.serve();
}

}  // namespace platoonsim::bridge
