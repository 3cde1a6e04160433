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

#include <optional>
#include <string>

#include "platoonsim/bridge/message.hpp"

namespace platoonsim::bridge {

/// Thin RAII wrapper over a connected TCP socket carrying framed messages.
/// Read timeout applies per message.
class MessageSocket {
 public:
  MessageSocket() = default;
  explicit MessageSocket(int fd) : fd_(fd) {}
  ~MessageSocket();

  MessageSocket(MessageSocket&& other) noexcept;
  MessageSocket& operator=(MessageSocket&& other) noexcept;
  MessageSocket(const MessageSocket&) = delete;
  MessageSocket& operator=(const MessageSocket&) = delete;

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }

  void set_recv_timeout(double seconds);

  /// Sends one framed message. Throws SimError(CoSimFault) on I/O failure.
  void send(const Message& message);

  /// Receives one framed message. nullopt on orderly peer close before any
  /// byte of a frame; throws CodecError on malformed/oversize frames and
  /// SimError(CoSimFault) on timeout or mid-frame EOF.
  std::optional<Message> receive();

  void close();

 private:
  bool read_exact(char* buf, std::size_t n, bool* clean_eof_at_start);

  int fd_ = -1;
};

/// Connects to host:port; throws SimError(CoSimFault) on failure.
MessageSocket connect_socket(const std::string& host, int port,
                             double timeout_s);

/// Listening socket bound to host:port (port 0 picks an ephemeral port).
class ListenSocket {
 public:
  ListenSocket(const std::string& host, int port);
  ~ListenSocket();

  ListenSocket(const ListenSocket&) = delete;
  ListenSocket& operator=(const ListenSocket&) = delete;

  int bound_port() const { return port_; }

  /// Blocks until a client connects; invalid socket after shutdown().
  MessageSocket accept_client();

  /// Unblocks accept_client() and prevents further accepts.
  void shutdown();

 private:
  int fd_ = -1;
  int port_ = 0;
};

}  // namespace platoonsim::bridge
