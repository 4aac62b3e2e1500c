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

#include <random>
#include <sstream>

#include "campaign/campaign.hpp"
#include "common/error.hpp"
#include "handshake/client.hpp"
#include "mock/responder.hpp"
#include "mock/test_certificate.hpp"
#include "probe/engine.hpp"
#include "wire/handshake_message.hpp"
#include "wire/packets.hpp"

namespace qr::campaign {

namespace {

using namespace std::chrono_literals;

net::Endpoint loopback() { return {*net::IpAddress::parse("127.0.0.1"), 0}; }

void report(std::ostream& log, int& failures, bool ok, const std::string& name, const std::string& detail) {
  if (!ok) ++failures;
  log << (ok ? "PASS " : "FAIL ") << name << ' ' << detail << '\n';
}

mock::ResponderProfile rej_profile(std::mt19937_64& rng, const std::string& host) {
  mock::ResponderProfile p;
  p.name = "rej";
  p.behavior = mock::Behavior::ServeRej;
  wire::ServerConfig c;
  for (auto& b : c.scid) b = static_cast<std::uint8_t>(rng());
  c.kexs = {wire::Tag::from("C255")};
  c.aead = {wire::Tag::from("AESG")};
  Bytes pub(32);
  for (auto& b : pub) b = static_cast<std::uint8_t>(rng());
  c.pubs = {pub};
  c.expy = 1900000000;
  c.vers = p.supported_versions;
  p.scfg = c;
  p.cert_inventory[host] = wire::CertificateChain{{mock::issue_self_signed(host).der}};
  return p;
}

}  // namespace

int run_selftest(std::ostream& log, unsigned trials) {
  int failures = 0;
  std::mt19937_64 rng(0x5e1f7e57);
  const auto probe_version = wire::make_unsupported_version();

  // Probe matrix: behavior x whether the responder also speaks the probe version.
  struct Cell {
    const char* name;
    mock::Behavior behavior;
    bool overlap;
    probe::Verdict expect;
  };
  const Cell cells[] = {
      {"negotiate/disjoint", mock::Behavior::Negotiate, false, probe::Verdict::VersionNegotiation},
      {"negotiate/overlap", mock::Behavior::Negotiate, true, probe::Verdict::Timeout},
      {"reset/disjoint", mock::Behavior::Reset, false, probe::Verdict::PublicReset},
      {"reset/overlap", mock::Behavior::Reset, true, probe::Verdict::PublicReset},
      {"silent", mock::Behavior::Silent, false, probe::Verdict::Timeout},
      {"malformed", mock::Behavior::Malformed, false, probe::Verdict::Malformed},
      {"serve-rej/disjoint", mock::Behavior::ServeRej, false, probe::Verdict::VersionNegotiation},
      {"serve-rej/overlap", mock::Behavior::ServeRej, true, probe::Verdict::Handshake},
  };
  for (const auto& cell : cells) {
    auto p = cell.behavior == mock::Behavior::ServeRej ? rej_profile(rng, "selftest.example") : mock::ResponderProfile{};
    p.behavior = cell.behavior;
    if (cell.overlap) p.supported_versions.push_back(probe_version);
    if (p.scfg) p.scfg->vers = p.supported_versions;
    probe::ScanConfig sc;
    bool waits = cell.expect == probe::Verdict::Timeout;
    sc.timeout = waits ? 150ms : 2s;
    unsigned n = waits ? std::min(trials, 4u) : trials;
    unsigned hits = 0;
    try {
      auto responder = mock::Responder::serve(p, loopback());
      for (unsigned i = 0; i < n; ++i) {
        auto o = probe::probe_one(responder->local_endpoint(), sc);
        if (o.verdict == cell.expect) ++hits;
      }
    } catch (const Error& e) {
      report(log, failures, false, std::string("probe:") + cell.name, e.what());
      continue;
    }
    report(log, failures, hits == n, std::string("probe:") + cell.name,
           std::to_string(hits) + "/" + std::to_string(n) + " " + probe::verdict_name(cell.expect));
  }

  // Handshake extraction.
  try {
    auto p = rej_profile(rng, "selftest.example");
    auto responder = mock::Responder::serve(p, loopback());
    handshake::HandshakeParams hp;
    hp.sni = "selftest.example";
    hp.timeout = 2s;
    auto r = handshake::perform_handshake(responder->local_endpoint(), hp);
    bool ok = r.status == handshake::HandshakeStatus::QuicEnabled && r.scfg && *r.scfg == *p.scfg && r.certs &&
              *r.certs == p.cert_inventory["selftest.example"];
    report(log, failures, ok, "handshake:extract", handshake::status_name(r.status));

    p.sni_required = true;
    auto sni_only = mock::Responder::serve(p, loopback());
    hp.sni.clear();
    r = handshake::perform_handshake(sni_only->local_endpoint(), hp);
    report(log, failures, r.status == handshake::HandshakeStatus::QuicEnabled && !r.certs, "handshake:sni-required",
           handshake::status_name(r.status));

    p.sni_required = false;
    p.supported_versions = {wire::VersionTag::from("Q099")};
    p.scfg->vers = p.supported_versions;
    auto disjoint = mock::Responder::serve(p, loopback());
    r = handshake::perform_handshake(disjoint->local_endpoint(), hp);
    report(log, failures, r.status == handshake::HandshakeStatus::VersionFailed, "handshake:disjoint-versions",
           handshake::status_name(r.status));
  } catch (const Error& e) {
    report(log, failures, false, "handshake", e.what());
  }

  // Codec round trips.
  unsigned bad = 0;
  for (int i = 0; i < 1000; ++i) {
    wire::HandshakeMessage m;
    m.message_tag = wire::tags::CHLO;
    auto count = rng() % 10;
    for (std::size_t k = 0; k < count; ++k) {
      Bytes v(rng() % 48);
      for (auto& b : v) b = static_cast<std::uint8_t>(rng());
      m.set(wire::Tag{static_cast<std::uint32_t>(rng())}, v);
    }
    try {
      auto enc = wire::encode_handshake_message(m);
      if (wire::encode_handshake_message(wire::decode_handshake_message(enc)) != enc) ++bad;
    } catch (const Error&) {
      ++bad;
    }
    Bytes junk(rng() % 256);
    for (auto& b : junk) b = static_cast<std::uint8_t>(rng());
    (void)wire::decode_server_response(junk);
  }
  report(log, failures, bad == 0, "codec:round-trip", std::to_string(1000 - bad) + "/1000");
  return failures;
}

}  // namespace qr::campaign
