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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "net/address.hpp"
#include "traffic/prefix_map.hpp"

namespace qr::report {

inline const std::string kUnknownOperator = "unknown";

struct HostObservation {
  net::IpAddress address;
  std::optional<std::uint32_t> asn;  // skips the prefix lookup when set
  std::optional<std::string> rdns_name;
  std::optional<std::string> cert_fingerprint;
  std::vector<std::string> cert_names;  // leaf CN and SAN DNS names
};

struct AttributionRule {
  std::string pattern;  // case-insensitive glob
  std::string operator_name;
};

struct AttributionRules {
  std::vector<AttributionRule> cert;
  std::vector<AttributionRule> rdns;

  // "<cert|rdns> <pattern> <operator>" per line.
  static AttributionRules parse(std::string_view text);
  static AttributionRules from_file(const std::string& path);
  // Same content as data/attribution_rules.txt.
  static AttributionRules defaults();
};

enum class AttributionTier { Asn, Cert, Rdns, None };
const char* tier_name(AttributionTier t);

struct AttributionRecord {
  net::IpAddress address;
  std::optional<std::uint32_t> asn;
  std::optional<std::string> rdns_name;
  std::optional<std::string> cert_fingerprint;
  std::string operator_name;
  AttributionTier tier = AttributionTier::None;

  bool operator==(const AttributionRecord&) const = default;
};

// ASN > certificate rule > rDNS rule > "unknown".
AttributionRecord attribute_host(const HostObservation& h, const traffic::PrefixMap& pm,
                                 const traffic::OperatorMap& om, const AttributionRules& rules);

std::string attribution_to_jsonl(const AttributionRecord& r);

}  // namespace qr::report
