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

#include <memory>
#include <string>

#include "platoonsim/bridge/socket_io.hpp"
#include "platoonsim/sim/simulator_handle.hpp"

namespace platoonsim::bridge {

/// SimulatorHandle speaking the wire protocol to a remote simulator.
/// Behaviourally indistinguishable from an in-process handle; any protocol
/// irregularity (timeout, ERROR reply, invalid STATE) surfaces as
/// SimError(CoSimFault).
class RemoteSimulatorHandle : public SimulatorHandle {
 public:
  RemoteSimulatorHandle(MessageSocket socket, double dt_s);
  ~RemoteSimulatorHandle() override;

  Snapshot query_state(double t_s) override;
  void apply_commands(const std::vector<CommandRecord>& commands) override;
  SimClock step(double dt_s) override;
  void inject_event(const InsertionEvent& event) override;

  SimClock clock() const override { return clock_; }

  /// HELLO/HELLO_ACK exchange; must run once before any other call.
  void handshake();

 private:
  Message request(Payload payload);
  State expect_state(Message reply) const;

  MessageSocket socket_;
  SimClock clock_;
  std::uint64_t next_seq_ = 1;
  std::uint64_t last_server_seq_ = 0;
};

inline constexpr double kDefaultRequestTimeoutS = 5.0;

/// Performs the HELLO handshake and returns a ready handle.
std::unique_ptr<RemoteSimulatorHandle> connect(
    const std::string& host, int port, double dt_s,
    double timeout_s = kDefaultRequestTimeoutS);

}  // namespace platoonsim::bridge
