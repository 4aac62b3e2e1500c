// Copyright (C) 2026 The quic-recon Authors
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

#include <chrono>
#include <cstdint>
#include <optional>

#include "common/bytes.hpp"
#include "net/address.hpp"

namespace qr::net {

struct Datagram {
  Endpoint peer;
  // Local address the datagram was sent to (requires enable_pktinfo()).
  std::optional<IpAddress> local;
  std::size_t size = 0;
};

// Non-blocking UDP socket. All failures throw Error{SocketError|BindFailed}.
class UdpSocket {
 public:
  UdpSocket() = default;
  explicit UdpSocket(Family family);
  ~UdpSocket();
  UdpSocket(UdpSocket&& other) noexcept;
  UdpSocket& operator=(UdpSocket&& other) noexcept;
  UdpSocket(const UdpSocket&) = delete;
  UdpSocket& operator=(const UdpSocket&) = delete;

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }
  Family family() const { return family_; }

  void bind(const Endpoint& local);
  Endpoint local_endpoint() const;
  void enable_pktinfo();
  void set_buffer_sizes(int bytes);

  // Returns false when the kernel would block (EAGAIN); other errors throw.
  bool send_to(const Endpoint& peer, ByteView payload);
  // Sends with an explicit source address (replying from the address a
  // datagram arrived on).
  bool send_from(const Endpoint& peer, const IpAddress& source, ByteView payload);
  // Returns nullopt when nothing is queued.
  std::optional<Datagram> recv_from(std::span<std::uint8_t> buffer);

  // Waits until readable or timeout; returns true when readable.
  bool wait_readable(std::chrono::microseconds timeout) const;

  void close();

 private:
  int fd_ = -1;
  Family family_ = Family::V4;
};

}  // namespace qr::net
