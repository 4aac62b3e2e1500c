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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "net/address.hpp"

namespace qr::traffic {

// Longest-prefix-match table from prefix to origin ASN. One binary trie per
// address family; a later add() for the same prefix overwrites.
class PrefixMap {
 public:
  PrefixMap();

  void add(const net::Cidr& prefix, std::uint32_t asn);
  std::optional<std::uint32_t> lookup(const net::IpAddress& addr) const;
  std::size_t size() const { return size_; }

  // Lines "prefix asn" or "prefix,asn"; '#' comments. Also accepts the
  // routeviews pfx2as layout "base<TAB>len<TAB>asn" (multi-origin sets like
  // "13335_209" take the first origin).
  static PrefixMap parse(std::string_view text);
  static PrefixMap from_file(const std::string& path);

 private:
  struct Node {
    std::uint32_t child[2] = {0, 0};
    std::uint32_t asn = 0;
    bool has_value = false;
  };
  std::vector<Node>& trie(net::Family f) { return f == net::Family::V4 ? v4_ : v6_; }
  const std::vector<Node>& trie(net::Family f) const { return f == net::Family::V4 ? v4_ : v6_; }

  std::vector<Node> v4_, v6_;
  std::size_t size_ = 0;
};

inline const std::string kOtherOperator = "other";

// Operator name to ASN sets. Sets must be disjoint.
class OperatorMap {
 public:
  void add(const std::string& name, const std::vector<std::uint32_t>& asns);
  // kOtherOperator when the ASN belongs to no named operator.
  const std::string& operator_of(std::uint32_t asn) const;
  bool known(std::uint32_t asn) const { return by_asn_.count(asn) != 0; }
  // Named operators, sorted.
  std::vector<std::string> names() const;

  // Lines "name: asn, asn, ..." ('AS' prefixes allowed).
  static OperatorMap parse(std::string_view text);
  static OperatorMap from_file(const std::string& path);

 private:
  std::map<std::uint32_t, std::string> by_asn_;
  std::set<std::string> names_;
};

}  // namespace qr::traffic
