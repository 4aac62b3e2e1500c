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

#include "net/address.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>

#include <cstring>

#include "common/error.hpp"
#include "common/text.hpp"

namespace qr::net {

IpAddress IpAddress::v4(std::uint32_t host_order) {
  return v4({static_cast<std::uint8_t>(host_order >> 24), static_cast<std::uint8_t>(host_order >> 16),
             static_cast<std::uint8_t>(host_order >> 8), static_cast<std::uint8_t>(host_order)});
}

IpAddress IpAddress::v4(std::array<std::uint8_t, 4> octets) {
  IpAddress a;
  a.family_ = Family::V4;
  std::copy(octets.begin(), octets.end(), a.octets_.begin());
  return a;
}

IpAddress IpAddress::v6(const std::array<std::uint8_t, 16>& octets) {
  IpAddress a;
  a.family_ = Family::V6;
  a.octets_ = octets;
  return a;
}

std::optional<IpAddress> IpAddress::parse(std::string_view text) {
  std::string s(text);
  in_addr a4{};
  if (inet_pton(AF_INET, s.c_str(), &a4) == 1) {
    std::array<std::uint8_t, 4> o{};
    std::memcpy(o.data(), &a4, 4);
    return v4(o);
  }
  in6_addr a6{};
  if (inet_pton(AF_INET6, s.c_str(), &a6) == 1) {
    std::array<std::uint8_t, 16> o{};
    std::memcpy(o.data(), &a6, 16);
    return v6(o);
  }
  return std::nullopt;
}

std::uint32_t IpAddress::v4_host_order() const {
  return (std::uint32_t{octets_[0]} << 24) | (std::uint32_t{octets_[1]} << 16) | (std::uint32_t{octets_[2]} << 8) |
         octets_[3];
}

std::string IpAddress::to_string() const {
  char buf[INET6_ADDRSTRLEN] = {};
  inet_ntop(is_v4() ? AF_INET : AF_INET6, octets_.data(), buf, sizeof buf);
  return buf;
}

std::string Endpoint::to_string() const {
  if (address.is_v4()) return address.to_string() + ":" + std::to_string(port);
  return "[" + address.to_string() + "]:" + std::to_string(port);
}

unsigned Endpoint::to_sockaddr(sockaddr_storage& out) const {
  std::memset(&out, 0, sizeof out);
  if (address.is_v4()) {
    auto* sin = reinterpret_cast<sockaddr_in*>(&out);
    sin->sin_family = AF_INET;
    sin->sin_port = htons(port);
    std::memcpy(&sin->sin_addr, address.octets().data(), 4);
    return sizeof(sockaddr_in);
  }
  auto* sin6 = reinterpret_cast<sockaddr_in6*>(&out);
  sin6->sin6_family = AF_INET6;
  sin6->sin6_port = htons(port);
  std::memcpy(&sin6->sin6_addr, address.octets().data(), 16);
  return sizeof(sockaddr_in6);
}

Endpoint Endpoint::from_sockaddr(const sockaddr* sa) {
  Endpoint e;
  if (sa->sa_family == AF_INET) {
    const auto* sin = reinterpret_cast<const sockaddr_in*>(sa);
    std::array<std::uint8_t, 4> o{};
    std::memcpy(o.data(), &sin->sin_addr, 4);
    e.address = IpAddress::v4(o);
    e.port = ntohs(sin->sin_port);
  } else if (sa->sa_family == AF_INET6) {
    const auto* sin6 = reinterpret_cast<const sockaddr_in6*>(sa);
    std::array<std::uint8_t, 16> o{};
    std::memcpy(o.data(), &sin6->sin6_addr, 16);
    e.address = IpAddress::v6(o);
    e.port = ntohs(sin6->sin6_port);
  }
  return e;
}

std::size_t EndpointHash::operator()(const Endpoint& e) const noexcept {
  // FNV-1a over family, octets and port.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint8_t b) {
    h ^= b;
    h *= 1099511628211ull;
  };
  mix(static_cast<std::uint8_t>(e.address.family()));
  for (auto b : e.address.octets()) mix(b);
  mix(static_cast<std::uint8_t>(e.port >> 8));
  mix(static_cast<std::uint8_t>(e.port));
  return static_cast<std::size_t>(h);
}

Cidr::Cidr(IpAddress base, int prefix_len) : prefix_len_(prefix_len) {
  if (prefix_len < 0 || prefix_len > base.bit_length())
    fail(Errc::InvalidArgument, "prefix length out of range: " + std::to_string(prefix_len));
  // Canonicalize: clear host bits.
  auto octets = base.octets();
  for (int i = prefix_len; i < base.bit_length(); ++i) octets[i / 8] &= static_cast<std::uint8_t>(~(0x80 >> (i % 8)));
  if (base.is_v4()) {
    base_ = IpAddress::v4(std::array<std::uint8_t, 4>{octets[0], octets[1], octets[2], octets[3]});
  } else {
    base_ = IpAddress::v6(octets);
  }
}

std::optional<Cidr> Cidr::parse(std::string_view text) {
  text = trim(text);
  auto slash = text.find('/');
  auto addr = IpAddress::parse(text.substr(0, slash));
  if (!addr) return std::nullopt;
  int len = addr->bit_length();
  if (slash != std::string_view::npos) {
    auto len_text = text.substr(slash + 1);
    if (len_text.empty() || len_text.size() > 3) return std::nullopt;
    len = 0;
    for (char c : len_text) {
      if (c < '0' || c > '9') return std::nullopt;
      len = len * 10 + (c - '0');
    }
    if (len > addr->bit_length()) return std::nullopt;
  }
  return Cidr(*addr, len);
}

bool Cidr::contains(const IpAddress& a) const {
  if (a.family() != base_.family()) return false;
  const auto& x = a.octets();
  const auto& y = base_.octets();
  int full = prefix_len_ / 8;
  if (std::memcmp(x.data(), y.data(), static_cast<std::size_t>(full)) != 0) return false;
  int rem = prefix_len_ % 8;
  if (rem == 0) return true;
  auto mask = static_cast<std::uint8_t>(0xff << (8 - rem));
  return (x[full] & mask) == (y[full] & mask);
}

std::string Cidr::to_string() const { return base_.to_string() + "/" + std::to_string(prefix_len_); }

CidrSet CidrSet::from_file(const std::string& path) {
  CidrSet set;
  for (const auto& line : read_config_lines(path)) {
    auto c = Cidr::parse(line);
    if (!c) fail(Errc::ParseError, "bad prefix in " + path + ": " + line);
    set.add(*c);
  }
  return set;
}

bool CidrSet::contains(const IpAddress& a) const {
  for (const auto& p : prefixes_)
    if (p.contains(a)) return true;
  return false;
}

CidrSet default_bogons() {
  static const char* kRanges[] = {
      "0.0.0.0/8",     "10.0.0.0/8",      "100.64.0.0/10",   "127.0.0.0/8",    "169.254.0.0/16",
      "172.16.0.0/12", "192.0.0.0/24",    "192.0.2.0/24",    "192.168.0.0/16", "198.18.0.0/15",
      "198.51.100.0/24", "203.0.113.0/24", "224.0.0.0/4",    "240.0.0.0/4",    "::/128",
      "::1/128",       "::ffff:0:0/96",   "100::/64",        "2001:db8::/32",  "fc00::/7",
      "fe80::/10",     "ff00::/8",
  };
  CidrSet set;
  for (const char* r : kRanges) set.add(*Cidr::parse(r));
  return set;
}

}  // namespace qr::net
