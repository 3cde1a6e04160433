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

#include <atomic>
#include <functional>
#include <memory>
#include <string>

#include "platoonsim/bridge/socket_io.hpp"
#include "platoonsim/sim/simulator_handle.hpp"

namespace platoonsim::bridge {

/// Session phases of the strict request-response protocol.
enum class SessionPhase { AwaitHello, Ready, Closed };

using SimulatorFactory = std::function<std::unique_ptr<SimulatorHandle>()>;

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 9000;
  double dt_s = 0.1;
  /// Stop after this many sessions; 0 means serve until stop().
  int max_sessions = 0;
};

/// Serves one simulator over the wire protocol, one client session at a
/// time. Every session gets a freshly built simulator from the factory, so
/// a new client always starts from scenario time zero.
class BridgeServer {
 public:
  BridgeServer(SimulatorFactory factory, ServerConfig config);

  /// Blocks, accepting sessions until stop() or max_sessions.
  void serve();

  void stop();

  int bound_port() const { return listener_.bound_port(); }

 private:
  void run_session(MessageSocket socket);

  SimulatorFactory factory_;
  ServerConfig config_;
  ListenSocket listener_;
  std::atomic<bool> stopping_{false};
  std::atomic<int> session_fd_{-1};
};

/// Convenience wrapper matching the CLI: build, serve, block.
void serve(SimulatorFactory factory, const ServerConfig& config);

}  // namespace platoonsim::bridge
