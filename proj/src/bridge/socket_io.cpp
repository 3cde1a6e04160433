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

#include "platoonsim/bridge/socket_io.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <utility>

#include "platoonsim/bridge/codec.hpp"

namespace platoonsim::bridge {

namespace {

[[noreturn]] void fault(const std::string& what) {
  throw SimError(SimErrorCode::CoSimFault, what);
}

sockaddr_in make_addr(const std::string& host, int port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (host.empty() || host == "0.0.0.0") {
    addr.sin_addr.s_addr = INADDR_ANY;
  } else if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    fault("invalid address: " + host);
  }
  return addr;
}

}  // namespace

MessageSocket::~MessageSocket() { close(); }

MessageSocket::MessageSocket(MessageSocket&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)) {}

MessageSocket& MessageSocket::operator=(MessageSocket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

void MessageSocket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void MessageSocket::set_recv_timeout(double seconds) {
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(seconds);
  tv.tv_usec = static_cast<suseconds_t>(
      std::lround((seconds - static_cast<double>(tv.tv_sec)) * 1e6));
  ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

void MessageSocket::send(const Message& message) {
  const std::string bytes = frame(encode(message));
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t n =
        ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      fault("socket send failed: " + std::string(std::strerror(errno)));
    }
    sent += static_cast<std::size_t>(n);
  }
}

bool MessageSocket::read_exact(char* buf, std::size_t n,
                               bool* clean_eof_at_start) {
  std::size_t got = 0;
  while (got < n) {
    const ssize_t r = ::recv(fd_, buf + got, n - got, 0);
    if (r == 0) {
      if (got == 0 && clean_eof_at_start) {
        *clean_eof_at_start = true;
        return false;
      }
      fault("peer closed mid-frame");
    }
    if (r < 0) {
      if (errno == EINTR) continue;
      if (errno == EAGAIN || errno == EWOULDBLOCK) {
        fault("receive timeout");
      }
      fault("socket recv failed: " + std::string(std::strerror(errno)));
    }
    got += static_cast<std::size_t>(r);
  }
  return true;
}

std::optional<Message> MessageSocket::receive() {
  char header[4];
  bool clean_eof = false;
  if (!read_exact(header, 4, &clean_eof)) {
    return std::nullopt;  // orderly close between frames
  }
  const auto b = [&](int i) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(header[i]));
  };
  const std::uint32_t len = (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
  if (len > kMaxFrameBytes) {
    throw CodecError(kErrOversize, "incoming frame exceeds 16 MiB");
  }
  std::string payload(len, '\0');
  if (len > 0) read_exact(payload.data(), len, nullptr);
  return decode(payload);
}

MessageSocket connect_socket(const std::string& host, int port,
                             double timeout_s) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) fault("cannot create socket");
  sockaddr_in addr = make_addr(host.empty() ? "127.0.0.1" : host, port);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    fault("connect to " + host + ":" + std::to_string(port) + " failed: " +
          err);
  }
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  MessageSocket s(fd);
  s.set_recv_timeout(timeout_s);
  return s;
}

ListenSocket::ListenSocket(const std::string& host, int port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) fault("cannot create listen socket");
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = make_addr(host, port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd_);
    fd_ = -1;
    fault("bind " + host + ":" + std::to_string(port) + " failed: " + err);
  }
  if (::listen(fd_, 1) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd_);
    fd_ = -1;
    fault("listen failed: " + err);
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

ListenSocket::~ListenSocket() { shutdown(); }

MessageSocket ListenSocket::accept_client() {
  const int client = ::accept(fd_, nullptr, nullptr);
  if (client < 0) return MessageSocket();
  int one = 1;
  ::setsockopt(client, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return MessageSocket(client);
}

void ListenSocket::shutdown() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }
}

}  // namespace platoonsim::bridge
