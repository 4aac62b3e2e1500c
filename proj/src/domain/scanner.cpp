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

#include "domain/scanner.hpp"

#include <cmath>

#include "json.hpp"

#include "common/error.hpp"

namespace qr::domain {

const char* category_name(Category c) {
  switch (c) {
    case Category::QuicEnabled: return "quic_enabled";
    case Category::Timeout: return "timeout";
    case Category::VersionFailed: return "version_failed";
    case Category::ProtocolError: return "protocol_error";
    case Category::InvalidIP: return "invalid_ip";
    case Category::DnsFailure: return "dns_failure";
  }
  return "unknown";
}

std::optional<Category> parse_category(std::string_view s) {
  for (auto c : kAllCategories)
    if (s == category_name(c)) return c;
  return std::nullopt;
}

namespace {

Category from_status(handshake::HandshakeStatus s) {
  switch (s) {
    case handshake::HandshakeStatus::QuicEnabled: return Category::QuicEnabled;
    case handshake::HandshakeStatus::VersionFailed: return Category::VersionFailed;
    case handshake::HandshakeStatus::ProtocolError: return Category::ProtocolError;
    case handshake::HandshakeStatus::Timeout: return Category::Timeout;
  }
  return Category::ProtocolError;
}

std::optional<net::IpAddress> pick_address(const DomainRecord& rec, const net::CidrSet& bogons) {
  std::optional<net::IpAddress> v6;
  for (const auto& a : rec.addresses) {
    if (bogons.contains(a)) continue;
    if (a.is_v4()) return a;
    if (!v6) v6 = a;
  }
  return v6;
}

}  // namespace

ScanVerdict scan_domain(const std::string& name, Resolver& resolver, const DomainScanConfig& cfg) {
  ScanVerdict v;
  v.name = normalize_name(name);
  v.resolution = resolver.resolve(v.name);
  if (v.resolution.status != Resolution::Ok || v.resolution.addresses.empty()) {
    v.category = Category::DnsFailure;
    return v;
  }
  auto addr = pick_address(v.resolution, cfg.bogons);
  if (!addr) {
    v.category = Category::InvalidIP;
    return v;
  }
  v.address = net::Endpoint{*addr, cfg.port};

  auto params = cfg.handshake;
  params.sni = v.name;
  auto result = handshake::perform_handshake(*v.address, params);
  v.category = from_status(result.status);
  if (v.category == Category::QuicEnabled && result.certs && !result.certs->entries.empty()) {
    try {
      v.cert = handshake::validate_certificate(*result.certs, v.name, cfg.anchors,
                                               cfg.now.value_or(std::chrono::system_clock::now()));
      v.cert_valid = v.cert->valid;
    } catch (const Error&) {
      // Undecodable DER: the certificate cannot be valid.
      v.cert = handshake::CertVerdict{};
    }
  }
  v.handshake = std::move(result);
  return v;
}

std::string verdict_to_jsonl(const ScanVerdict& v) {
  nlohmann::json j;
  j["domain"] = v.name;
  j["category"] = category_name(v.category);
  j["cert_valid"] = v.cert_valid;
  j["resolution"] = resolution_name(v.resolution.status);
  auto addrs = nlohmann::json::array();
  for (const auto& a : v.resolution.addresses) addrs.push_back(a.to_string());
  j["addresses"] = addrs;
  j["addr"] = v.address ? nlohmann::json(v.address->to_string()) : nlohmann::json(nullptr);
  j["version"] = nullptr;
  j["scid_hex"] = nullptr;
  auto fps = nlohmann::json::array();
  if (v.handshake) {
    const auto& h = *v.handshake;
    if (h.negotiated_version) j["version"] = h.negotiated_version->to_string();
    if (h.scfg) j["scid_hex"] = hex_encode(ByteView(h.scfg->scid.data(), h.scfg->scid.size()));
    if (h.certs)
      for (const auto& der : h.certs->entries) {
        auto d = sha256(der);
        fps.push_back(hex_encode(ByteView(d.data(), d.size())));
      }
    j["rtt_ms"] = std::round(h.rtt.count() / 10.0) / 100.0;
  }
  j["cert_fingerprints"] = fps;
  if (v.cert) {
    j["chain_ok"] = v.cert->chain_ok;
    j["name_match"] = v.cert->name_match;
    j["not_expired"] = v.cert->not_expired;
  }
  return j.dump();
}

VerdictRecord verdict_from_jsonl(std::string_view line) {
  try {
    auto j = nlohmann::json::parse(line);
    auto c = parse_category(j.at("category").get<std::string>());
    if (!c) fail(Errc::MalformedRecord, "bad category");
    VerdictRecord r{j.at("domain").get<std::string>(), *c, j.value("cert_valid", false)};
    if (r.cert_valid && r.category != Category::QuicEnabled) fail(Errc::MalformedRecord, "cert_valid without quic");
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::MalformedRecord, e.what());
  }
}

}  // namespace qr::domain
