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

#include "report/attribution.hpp"

#include "common/error.hpp"
#include "common/text.hpp"
#include "json.hpp"

namespace qr::report {

namespace {

constexpr const char* kDefaultRules = R"(
cert *.google.com google
cert *.googlevideo.com google
cert *.gstatic.com google
cert *.akamaized.net akamai
cert *.akamaihd.net akamai
cert a248.e.akamai.net akamai
rdns *.deploy.static.akamaitechnologies.com akamai
rdns *.akamaitechnologies.com akamai
rdns *.1e100.net google
)";

std::string strip_dot(std::string_view s) {
  if (!s.empty() && s.back() == '.') s.remove_suffix(1);
  return std::string(s);
}

const AttributionRule* first_match(const std::vector<AttributionRule>& rules, std::string_view name) {
  for (const auto& r : rules)
    if (glob_match_ci(r.pattern, name)) return &r;
  return nullptr;
}

}  // namespace

const char* tier_name(AttributionTier t) {
  switch (t) {
    case AttributionTier::Asn: return "asn";
    case AttributionTier::Cert: return "cert";
    case AttributionTier::Rdns: return "rdns";
    case AttributionTier::None: return "none";
  }
  return "none";
}

AttributionRules AttributionRules::parse(std::string_view text) {
  AttributionRules rules;
  for (const auto& line : config_lines(text)) {
    std::vector<std::string> f;
    for (auto& tok : split(line, ' '))
      for (auto& t : split(tok, '\t'))
        if (!t.empty()) f.push_back(t);
    if (f.size() != 3) fail(Errc::ConfigInvalid, "attribution rule needs 3 fields: '" + line + "'");
    AttributionRule r{f[1], to_lower(f[2])};
    auto tier = to_lower(f[0]);
    if (tier == "cert") rules.cert.push_back(std::move(r));
    else if (tier == "rdns") rules.rdns.push_back(std::move(r));
    else fail(Errc::ConfigInvalid, "unknown attribution tier '" + f[0] + "'");
  }
  return rules;
}

AttributionRules AttributionRules::from_file(const std::string& path) { return parse(read_file(path)); }

AttributionRules AttributionRules::defaults() { return parse(kDefaultRules); }

AttributionRecord attribute_host(const HostObservation& h, const traffic::PrefixMap& pm,
                                 const traffic::OperatorMap& om, const AttributionRules& rules) {
  AttributionRecord r;
  r.address = h.address;
  r.asn = h.asn ? h.asn : pm.lookup(h.address);
  r.rdns_name = h.rdns_name;
  r.cert_fingerprint = h.cert_fingerprint;
  r.operator_name = kUnknownOperator;
  if (r.asn && om.known(*r.asn)) {
    r.operator_name = om.operator_of(*r.asn);
    r.tier = AttributionTier::Asn;
    return r;
  }
  for (const auto& rule : rules.cert)
    for (const auto& name : h.cert_names)
      if (glob_match_ci(rule.pattern, strip_dot(name))) {
        r.operator_name = rule.operator_name;
        r.tier = AttributionTier::Cert;
        return r;
      }
  if (h.rdns_name)
    if (auto* rule = first_match(rules.rdns, strip_dot(*h.rdns_name))) {
      r.operator_name = rule->operator_name;
      r.tier = AttributionTier::Rdns;
    }
  return r;
}

std::string attribution_to_jsonl(const AttributionRecord& r) {
  nlohmann::ordered_json j;
  j["addr"] = r.address.to_string();
  j["asn"] = r.asn ? nlohmann::ordered_json(*r.asn) : nlohmann::ordered_json();
  j["rdns"] = r.rdns_name ? nlohmann::ordered_json(*r.rdns_name) : nlohmann::ordered_json();
  j["cert_fingerprint"] = r.cert_fingerprint ? nlohmann::ordered_json(*r.cert_fingerprint) : nlohmann::ordered_json();
  j["operator"] = r.operator_name;
  j["tier"] = tier_name(r.tier);
  return j.dump();
}

}  // namespace qr::report
