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

#include <optional>
#include <string>

#include "domain/resolver.hpp"
#include "handshake/certificates.hpp"
#include "handshake/client.hpp"

namespace qr::domain {

enum class Category { QuicEnabled, Timeout, VersionFailed, ProtocolError, InvalidIP, DnsFailure };

inline constexpr Category kAllCategories[] = {Category::QuicEnabled,   Category::Timeout,   Category::VersionFailed,
                                              Category::ProtocolError, Category::InvalidIP, Category::DnsFailure};

const char* category_name(Category c);
std::optional<Category> parse_category(std::string_view s);

struct DomainScanConfig {
  // sni is overwritten with the domain name.
  handshake::HandshakeParams handshake;
  // Addresses treated as unroutable ("Invalid-IP").
  net::CidrSet bogons = net::default_bogons();
  std::uint16_t port = 443;
  handshake::TrustAnchors anchors;
  // Validation time; now when unset.
  std::optional<SystemTime> now;
};

struct ScanVerdict {
  std::string name;
  Category category = Category::DnsFailure;
  bool cert_valid = false;  // only ever true for QuicEnabled
  DomainRecord resolution;
  std::optional<net::Endpoint> address;
  std::optional<handshake::HandshakeResult> handshake;
  std::optional<handshake::CertVerdict> cert;
};

// Precedence: DnsFailure, InvalidIP, then a handshake with the first routable
// address (IPv4 preferred).
ScanVerdict scan_domain(const std::string& name, Resolver& resolver, const DomainScanConfig& cfg);

// {"domain","category","cert_valid","resolution","addr","version","scid_hex","cert_fingerprints","leaf_cn","chain_ok","name_match","not_expired"}
std::string verdict_to_jsonl(const ScanVerdict& v);
struct VerdictRecord {
  std::string name;
  Category category;
  bool cert_valid;
};
// Throws MalformedRecord.
VerdictRecord verdict_from_jsonl(std::string_view line);

}  // namespace qr::domain
