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

#include <gtest/gtest.h>

#include <set>

#include "handshake/client.hpp"
#include "mock/responder.hpp"
#include "net/udp_socket.hpp"
#include "support/generators.hpp"
#include "support/mock_targets.hpp"

namespace qr::handshake {
namespace {

using namespace std::chrono_literals;
using mock::Behavior;
using mock::Responder;

HandshakeParams params(std::string sni, std::chrono::milliseconds timeout = 1000ms) {
  HandshakeParams p;
  p.sni = std::move(sni);
  p.timeout = timeout;
  return p;
}

std::set<wire::Tag> tags_of(const wire::HandshakeMessage& m) {
  std::set<wire::Tag> s;
  for (const auto& e : m.entries) s.insert(e.tag);
  return s;
}

TEST(Handshake, ExtractsConfigAndChain) {
  std::mt19937_64 rng(11);
  auto profile = test::random_rej_profile(rng, "example.com");
  profile.supported_versions = {wire::VersionTag::from("Q035")};
  profile.scfg->vers = profile.supported_versions;
  auto r = Responder::serve(profile, test::loopback());
  auto res = perform_handshake(r->local_endpoint(), params("example.com"));
  ASSERT_EQ(res.status, HandshakeStatus::QuicEnabled);
  ASSERT_TRUE(res.scfg);
  EXPECT_EQ(*res.scfg, *profile.scfg);
  ASSERT_TRUE(res.certs);
  EXPECT_EQ(*res.certs, profile.cert_inventory["example.com"]);
  EXPECT_EQ(res.source_token, profile.source_token);
  EXPECT_EQ(res.negotiated_version, wire::VersionTag::from("Q035"));
  EXPECT_EQ(res.chlo_sent, 1u);

  auto log = r->shutdown();
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(to_string(*log[0].inbound->message.find(wire::tags::SNI)), "example.com");
}

TEST(Handshake, TokenGateTakesSecondRoundWithMoreTags) {
  std::mt19937_64 rng(12);
  auto profile = test::random_rej_profile(rng, "svc.test");
  profile.supported_versions = {wire::VersionTag::from("Q035")};
  profile.require_stk = true;
  auto r = Responder::serve(profile, test::loopback());
  auto res = perform_handshake(r->local_endpoint(), params("svc.test"));
  ASSERT_EQ(res.status, HandshakeStatus::QuicEnabled);
  EXPECT_EQ(res.chlo_sent, 2u);
  EXPECT_TRUE(res.certs);

  std::vector<std::set<wire::Tag>> sent;
  for (const auto& e : res.trace.events)
    if (e.direction == Direction::Sent) sent.push_back(tags_of(*e.message));
  ASSERT_EQ(sent.size(), 2u);
  EXPECT_TRUE(std::includes(sent[1].begin(), sent[1].end(), sent[0].begin(), sent[0].end()));
  EXPECT_TRUE(sent[1].count(wire::tags::STK));
  EXPECT_TRUE(sent[1].count(wire::tags::SCID));
}

TEST(Handshake, NoSniAgainstSniRequired) {
  std::mt19937_64 rng(13);
  auto profile = test::random_rej_profile(rng, "example.com");
  profile.supported_versions = {wire::VersionTag::from("Q035")};
  profile.sni_required = true;
  auto r = Responder::serve(profile, test::loopback());
  auto res = perform_handshake(r->local_endpoint(), params(""));
  EXPECT_EQ(res.status, HandshakeStatus::QuicEnabled);
  EXPECT_FALSE(res.certs);
  EXPECT_TRUE(res.scfg);
  EXPECT_EQ(res.chlo_sent, 3u);
  EXPECT_EQ(res.trace.events.size(), 6u);
}

TEST(Handshake, NegotiatesDownToSharedVersion) {
  std::mt19937_64 rng(14);
  auto profile = test::random_rej_profile(rng, "example.com");
  profile.supported_versions = {wire::VersionTag::from("Q032"), wire::VersionTag::from("Q037"),
                                wire::VersionTag::from("Q099")};
  auto r = Responder::serve(profile, test::loopback());
  auto res = perform_handshake(r->local_endpoint(), params("example.com"));
  ASSERT_EQ(res.status, HandshakeStatus::QuicEnabled);
  EXPECT_EQ(res.negotiated_version, wire::VersionTag::from("Q037"));
  EXPECT_EQ(res.server_versions.size(), 3u);
  EXPECT_EQ(res.trace.events[1].kind, "version_negotiation");
}

TEST(Handshake, DisjointVersionsFail) {
  std::mt19937_64 rng(15);
  auto profile = test::random_rej_profile(rng, "example.com");
  profile.supported_versions = {wire::VersionTag::from("Q043"), wire::VersionTag::from("Q046")};
  auto r = Responder::serve(profile, test::loopback());
  auto res = perform_handshake(r->local_endpoint(), params("example.com"));
  EXPECT_EQ(res.status, HandshakeStatus::VersionFailed);
  EXPECT_FALSE(res.scfg);
  EXPECT_FALSE(res.certs);
  EXPECT_EQ(res.chlo_sent, 1u);
}

TEST(Handshake, ResetAndGarbageAreProtocolErrors) {
  for (auto b : {Behavior::Reset, Behavior::Malformed}) {
    mock::ResponderProfile p;
    p.behavior = b;
    auto r = Responder::serve(p, test::loopback());
    auto res = perform_handshake(r->local_endpoint(), params("example.com"));
    EXPECT_EQ(res.status, HandshakeStatus::ProtocolError);
    EXPECT_EQ(res.chlo_sent, 1u);
    ASSERT_EQ(res.trace.events.size(), 2u);
    EXPECT_FALSE(res.trace.events[1].raw.empty());
    EXPECT_FALSE(res.trace.events[1].note.empty());
  }
}

TEST(Handshake, SilentTimesOut) {
  mock::ResponderProfile p;
  p.behavior = Behavior::Silent;
  auto r = Responder::serve(p, test::loopback());
  auto t0 = std::chrono::steady_clock::now();
  auto res = perform_handshake(r->local_endpoint(), params("example.com", 100ms));
  EXPECT_EQ(res.status, HandshakeStatus::Timeout);
  EXPECT_GE(std::chrono::steady_clock::now() - t0, 100ms);
  EXPECT_EQ(res.chlo_sent, 1u);
}

TEST(Handshake, TraceTimestampsOrdered) {
  std::mt19937_64 rng(16);
  auto profile = test::random_rej_profile(rng, "example.com");
  profile.supported_versions = {wire::VersionTag::from("Q036")};
  profile.require_stk = true;
  auto r = Responder::serve(profile, test::loopback());
  auto res = perform_handshake(r->local_endpoint(), params("example.com"));
  ASSERT_EQ(res.status, HandshakeStatus::QuicEnabled);
  for (std::size_t i = 1; i < res.trace.events.size(); ++i)
    EXPECT_LE(res.trace.events[i - 1].timestamp, res.trace.events[i].timestamp);
  // Every CHLO is followed by its reply.
  for (std::size_t i = 0; i < res.trace.events.size(); i += 2) {
    EXPECT_EQ(res.trace.events[i].direction, Direction::Sent);
    EXPECT_EQ(res.trace.events[i + 1].direction, Direction::Received);
  }
}

TEST(Handshake, ParamsValidated) {
  auto p = params("bad name!");
  EXPECT_THROW(perform_handshake(test::loopback(443), p), Error);
  p = params("ok.example");
  p.max_rounds = 0;
  EXPECT_THROW(perform_handshake(test::loopback(443), p), Error);
}

TEST(Handshake, JsonlRecord) {
  std::mt19937_64 rng(17);
  auto profile = test::random_rej_profile(rng, "example.com");
  profile.supported_versions = {wire::VersionTag::from("Q035")};
  auto r = Responder::serve(profile, test::loopback());
  auto hp = params("example.com");
  auto res = perform_handshake(r->local_endpoint(), hp);
  auto line = handshake_to_jsonl("example.com", r->local_endpoint(), hp, res, CertVerdict{true, true, true, true});
  auto g = grab_record_from_jsonl(line);
  EXPECT_EQ(g.host, "example.com");
  EXPECT_EQ(g.status, "quic_enabled");
  EXPECT_EQ(g.cert_fingerprints.size(), profile.cert_inventory["example.com"].entries.size());
  EXPECT_EQ(g.cert_fingerprints[0], fingerprint_hex(profile.cert_inventory["example.com"]));
  EXPECT_EQ(g.leaf_cn, "example.com");
  EXPECT_EQ(g.cert_valid, true);
}

}  // namespace
}  // namespace qr::handshake
