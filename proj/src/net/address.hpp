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

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

struct sockaddr;
struct sockaddr_storage;

namespace qr::net {

enum class Family : std::uint8_t { V4 = 4, V6 = 6 };

// IPv4 addresses keep their four octets at the front of `octets`.
class IpAddress {
 public:
  IpAddress() = default;
  static IpAddress v4(std::uint32_t host_order);
  static IpAddress v4(std::array<std::uint8_t, 4> octets);
  static IpAddress v6(const std::array<std::uint8_t, 16>& octets);
  static std::optional<IpAddress> parse(std::string_view text);

  Family family() const { return family_; }
  bool is_v4() const { return family_ == Family::V4; }
  int bit_length() const { return is_v4() ? 32 : 128; }
  // Bit i counted from the most significant bit.
  bool bit(int i) const { return (octets_[i / 8] >> (7 - i % 8)) & 1; }
  std::uint32_t v4_host_order() const;
  const std::array<std::uint8_t, 16>& octets() const { return octets_; }

  std::string to_string() const;

  auto operator<=>(const IpAddress&) const = default;

 private:
  Family family_ = Family::V4;
  std::array<std::uint8_t, 16> octets_{};
};

struct Endpoint {
  IpAddress address;
  std::uint16_t port = 443;

  std::string to_string() const;
  auto operator<=>(const Endpoint&) const = default;

  // Fills `out` and returns the sockaddr length.
  unsigned to_sockaddr(sockaddr_storage& out) const;
  static Endpoint from_sockaddr(const sockaddr* sa);
};

struct EndpointHash {
  std::size_t operator()(const Endpoint& e) const noexcept;
};

class Cidr {
 public:
  Cidr() = default;
  Cidr(IpAddress base, int prefix_len);
  // "10.0.0.0/8", "2001:db8::/32"; a bare address is a host prefix.
  static std::optional<Cidr> parse(std::string_view text);

  const IpAddress& base() const { return base_; }
  int prefix_len() const { return prefix_len_; }
  bool contains(const IpAddress& a) const;
  std::string to_string() const;

  auto operator<=>(const Cidr&) const = default;

 private:
  IpAddress base_;
  int prefix_len_ = 0;
};

class CidrSet {
 public:
  CidrSet() = default;
  explicit CidrSet(std::vector<Cidr> prefixes) : prefixes_(std::move(prefixes)) {}
  static CidrSet from_file(const std::string& path);

  void add(Cidr c) { prefixes_.push_back(c); }
  bool contains(const IpAddress& a) const;
  bool empty() const { return prefixes_.empty(); }
  const std::vector<Cidr>& prefixes() const { return prefixes_; }

 private:
  std::vector<Cidr> prefixes_;
};

// Special-purpose ranges that never appear as a public endpoint: this-network,
// private, loopback, link-local, CGN, documentation, benchmarking, multicast,
// reserved, and their IPv6 counterparts.
CidrSet default_bogons();

}  // namespace qr::net
