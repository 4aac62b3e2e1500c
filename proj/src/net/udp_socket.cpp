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

#include "net/udp_socket.hpp"

#include <fcntl.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "common/error.hpp"

namespace qr::net {

namespace {
[[noreturn]] void sock_fail(Errc code, const char* what) {
  fail(code, std::string(what) + ": " + std::strerror(errno));
}
}  // namespace

UdpSocket::UdpSocket(Family family) : family_(family) {
  fd_ = ::socket(family == Family::V4 ? AF_INET : AF_INET6, SOCK_DGRAM | SOCK_NONBLOCK | SOCK_CLOEXEC, 0);
  if (fd_ < 0) sock_fail(Errc::SocketError, "socket");
}

UdpSocket::~UdpSocket() { close(); }

UdpSocket::UdpSocket(UdpSocket&& other) noexcept : fd_(other.fd_), family_(other.family_) { other.fd_ = -1; }

UdpSocket& UdpSocket::operator=(UdpSocket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    family_ = other.family_;
    other.fd_ = -1;
  }
  return *this;
}

void UdpSocket::close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void UdpSocket::bind(const Endpoint& local) {
  // No SO_REUSEADDR: with it, Linux may hand the same ephemeral port to two
  // sockets and split their replies.
  sockaddr_storage ss{};
  auto len = local.to_sockaddr(ss);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&ss), len) != 0) sock_fail(Errc::BindFailed, "bind");
}

Endpoint UdpSocket::local_endpoint() const {
  sockaddr_storage ss{};
  socklen_t len = sizeof ss;
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&ss), &len) != 0) sock_fail(Errc::SocketError, "getsockname");
  return Endpoint::from_sockaddr(reinterpret_cast<sockaddr*>(&ss));
}

void UdpSocket::enable_pktinfo() {
  int one = 1;
  int rc = family_ == Family::V4 ? ::setsockopt(fd_, IPPROTO_IP, IP_PKTINFO, &one, sizeof one)
                                 : ::setsockopt(fd_, IPPROTO_IPV6, IPV6_RECVPKTINFO, &one, sizeof one);
  if (rc != 0) sock_fail(Errc::SocketError, "setsockopt(PKTINFO)");
}

void UdpSocket::set_buffer_sizes(int bytes) {
  ::setsockopt(fd_, SOL_SOCKET, SO_RCVBUF, &bytes, sizeof bytes);
  ::setsockopt(fd_, SOL_SOCKET, SO_SNDBUF, &bytes, sizeof bytes);
}

bool UdpSocket::send_to(const Endpoint& peer, ByteView payload) {
  sockaddr_storage ss{};
  auto len = peer.to_sockaddr(ss);
  auto n = ::sendto(fd_, payload.data(), payload.size(), 0, reinterpret_cast<sockaddr*>(&ss), len);
  if (n < 0) {
    if (errno == EAGAIN || errno == EWOULDBLOCK || errno == ENOBUFS) return false;
    // ICMP errors surface on the next send for unconnected sockets; not fatal.
    if (errno == ECONNREFUSED || errno == EHOSTUNREACH || errno == ENETUNREACH) return true;
    sock_fail(Errc::SocketError, "sendto");
  }
  return true;
}

bool UdpSocket::send_from(const Endpoint& peer, const IpAddress& source, ByteView payload) {
  sockaddr_storage ss{};
  auto len = peer.to_sockaddr(ss);
  iovec iov{const_cast<std::uint8_t*>(payload.data()), payload.size()};
  alignas(cmsghdr) char control[CMSG_SPACE(sizeof(in6_pktinfo))] = {};
  msghdr msg{};
  msg.msg_name = &ss;
  msg.msg_namelen = len;
  msg.msg_iov = &iov;
  msg.msg_iovlen = 1;
  msg.msg_control = control;
  if (source.is_v4() && family_ == Family::V4) {
    msg.msg_controllen = CMSG_SPACE(sizeof(in_pktinfo));
    auto* cm = CMSG_FIRSTHDR(&msg);
    cm->cmsg_level = IPPROTO_IP;
    cm->cmsg_type = IP_PKTINFO;
    cm->cmsg_len = CMSG_LEN(sizeof(in_pktinfo));
    in_pktinfo info{};
    std::memcpy(&info.ipi_spec_dst, source.octets().data(), 4);
    std::memcpy(CMSG_DATA(cm), &info, sizeof info);
  } else if (!source.is_v4() && family_ == Family::V6) {
    msg.msg_controllen = CMSG_SPACE(sizeof(in6_pktinfo));
    auto* cm = CMSG_FIRSTHDR(&msg);
    cm->cmsg_level = IPPROTO_IPV6;
    cm->cmsg_type = IPV6_PKTINFO;
    cm->cmsg_len = CMSG_LEN(sizeof(in6_pktinfo));
    in6_pktinfo info{};
    std::memcpy(&info.ipi6_addr, source.octets().data(), 16);
    std::memcpy(CMSG_DATA(cm), &info, sizeof info);
  } else {
    msg.msg_control = nullptr;
  }
  auto n = ::sendmsg(fd_, &msg, 0);
  if (n < 0) {
    if (errno == EAGAIN || errno == EWOULDBLOCK || errno == ENOBUFS) return false;
    if (errno == ECONNREFUSED || errno == EHOSTUNREACH || errno == ENETUNREACH) return true;
    sock_fail(Errc::SocketError, "sendmsg");
  }
  return true;
}

std::optional<Datagram> UdpSocket::recv_from(std::span<std::uint8_t> buffer) {
  sockaddr_storage ss{};
  iovec iov{buffer.data(), buffer.size()};
  alignas(cmsghdr) char control[256];
  msghdr msg{};
  msg.msg_name = &ss;
  msg.msg_namelen = sizeof ss;
  msg.msg_iov = &iov;
  msg.msg_iovlen = 1;
  msg.msg_control = control;
  msg.msg_controllen = sizeof control;
  while (true) {
    auto n = ::recvmsg(fd_, &msg, 0);
    if (n < 0) {
      if (errno == EAGAIN || errno == EWOULDBLOCK) return std::nullopt;
      if (errno == EINTR) continue;
      // Queued ICMP port-unreachable from an earlier send; skip it.
      if (errno == ECONNREFUSED || errno == EHOSTUNREACH || errno == ENETUNREACH) continue;
      sock_fail(Errc::SocketError, "recvmsg");
    }
    Datagram d;
    d.peer = Endpoint::from_sockaddr(reinterpret_cast<sockaddr*>(&ss));
    d.size = static_cast<std::size_t>(n);
    for (auto* cm = CMSG_FIRSTHDR(&msg); cm != nullptr; cm = CMSG_NXTHDR(&msg, cm)) {
      if (cm->cmsg_level == IPPROTO_IP && cm->cmsg_type == IP_PKTINFO) {
        in_pktinfo info{};
        std::memcpy(&info, CMSG_DATA(cm), sizeof info);
        std::array<std::uint8_t, 4> o{};
        std::memcpy(o.data(), &info.ipi_addr, 4);
        d.local = IpAddress::v4(o);
      } else if (cm->cmsg_level == IPPROTO_IPV6 && cm->cmsg_type == IPV6_PKTINFO) {
        in6_pktinfo info{};
        std::memcpy(&info, CMSG_DATA(cm), sizeof info);
        std::array<std::uint8_t, 16> o{};
        std::memcpy(o.data(), &info.ipi6_addr, 16);
        d.local = IpAddress::v6(o);
      }
    }
    return d;
  }
}

bool UdpSocket::wait_readable(std::chrono::microseconds timeout) const {
  pollfd p{fd_, POLLIN, 0};
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(timeout).count();
  if (ms == 0 && timeout.count() > 0) ms = 1;
  int rc = ::poll(&p, 1, static_cast<int>(ms));
  if (rc < 0) {
    if (errno == EINTR) return false;
    sock_fail(Errc::SocketError, "poll");
  }
  return rc > 0 && (p.revents & (POLLIN | POLLERR)) != 0;
}

}  // namespace qr::net
