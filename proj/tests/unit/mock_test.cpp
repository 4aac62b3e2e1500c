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

#include <thread>

#include "mock/responder.hpp"
#include "mock/test_certificate.hpp"
#include "net/udp_socket.hpp"
#include "support/loopback.hpp"

namespace qr::mock {
namespace {

using namespace std::chrono_literals;
using test::Exchange;

ResponderProfile rej_profile() {
  ResponderProfile p;
  p.name = "rej";
  p.behavior = Behavior::ServeRej;
  p.scfg = wire::ServerConfig{};
  p.scfg->scid.fill(0x11);
  p.scfg->kexs = {wire::Tag::from("C255")};
  p.scfg->aead = {wire::Tag::from("AESG")};
  p.scfg->pubs = {Bytes(32, 0x22)};
  p.scfg->expy = 4102444800;
  p.scfg->vers = p.supported_versions;
  p.cert_inventory["example.com"] = wire::CertificateChain{{issue_self_signed("example.com").der}};
  return p;
}

TEST(Respond, NegotiateMismatchSendsVersionList) {
  ResponderProfile p;
  p.supported_versions = {wire::VersionTag::from("Q035"), wire::VersionTag::from("Q039")};
  std::uint64_t rng = 1;
  auto pkt = wire::decode_client_packet(wire::build_probe_chlo(42, wire::VersionTag::from("?123")));
  auto r = respond(p, pkt, rng);
  ASSERT_EQ(r.action, Action::VersionNegotiation);
  auto decoded = wire::decode_server_response(r.payload);
  auto* vn = std::get_if<wire::VersionNegotiationPacket>(&decoded);
  ASSERT_NE(vn, nullptr);
  EXPECT_EQ(vn->connection_id, 42u);
  EXPECT_EQ(vn->versions, p.supported_versions);
}

TEST(Respond, NegotiateMatchWithoutConfigIsSilent) {
  ResponderProfile p;
  std::uint64_t rng = 1;
  auto pkt = wire::decode_client_packet(wire::build_probe_chlo(1, wire::VersionTag::from("Q035")));
  EXPECT_EQ(respond(p, pkt, rng).action, Action::Silent);
}

TEST(Respond, ResetCarriesNonceAndSequence) {
  ResponderProfile p;
  p.behavior = Behavior::Reset;
  std::uint64_t rng = 9;
  auto pkt = wire::decode_client_packet(wire::build_probe_chlo(77, wire::VersionTag::from("?123")));
  auto r = respond(p, pkt, rng);
  auto decoded = wire::decode_server_response(r.payload);
  auto* rst = std::get_if<wire::PublicResetPacket>(&decoded);
  ASSERT_NE(rst, nullptr);
  EXPECT_TRUE(rst->body_valid);
  EXPECT_EQ(rst->connection_id, 77u);
  EXPECT_EQ(rst->body.find(wire::tags::RNON)->size(), 8u);
  EXPECT_TRUE(rst->body.has(wire::tags::RSEQ));
}

TEST(Respond, RandomGarbageNeverDecodesAsCapable) {
  ResponderProfile p;
  p.behavior = Behavior::Malformed;
  auto pkt = wire::decode_client_packet(wire::build_probe_chlo(1, wire::VersionTag::from("?123")));
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    std::uint64_t rng = seed;
    auto r = respond(p, pkt, rng);
    EXPECT_TRUE(std::holds_alternative<wire::Malformed>(wire::decode_server_response(r.payload)));
  }
}

TEST(Respond, RejCarriesConfigAndCertificates) {
  auto p = rej_profile();
  std::uint64_t rng = 3;
  wire::HandshakeMessage chlo;
  chlo.message_tag = wire::tags::CHLO;
  chlo.set(wire::tags::SNI, to_bytes("example.com"));
  auto pkt = wire::decode_client_packet(
      wire::build_client_hello(5, wire::VersionTag::from("Q035"), 1200, chlo));
  auto r = respond(p, pkt, rng);
  ASSERT_EQ(r.action, Action::Rej);
  auto decoded = wire::decode_server_response(r.payload);
  auto* hs = std::get_if<wire::HandshakePacket>(&decoded);
  ASSERT_NE(hs, nullptr);
  EXPECT_EQ(hs->message.message_tag, wire::tags::REJ);
  EXPECT_EQ(wire::decode_server_config(*hs->message.find(wire::tags::SCFG)), *p.scfg);
  auto crt = wire::decode_cert_chain(*hs->message.find(wire::tags::CRT));
  ASSERT_TRUE(crt.chain);
  EXPECT_EQ(*crt.chain, p.cert_inventory["example.com"]);

  // Unknown name with SNI required: no CRT.
  p.sni_required = true;
  chlo.set(wire::tags::SNI, to_bytes("nope.example"));
  pkt = wire::decode_client_packet(wire::build_client_hello(5, wire::VersionTag::from("Q035"), 1200, chlo));
  decoded = wire::decode_server_response(respond(p, pkt, rng).payload);
  EXPECT_FALSE(std::get<wire::HandshakePacket>(decoded).message.has(wire::tags::CRT));
}

TEST(Respond, SourceTokenGate) {
  auto p = rej_profile();
  p.require_stk = true;
  std::uint64_t rng = 3;
  wire::HandshakeMessage chlo;
  chlo.message_tag = wire::tags::CHLO;
  chlo.set(wire::tags::SNI, to_bytes("example.com"));
  auto send = [&] {
    auto pkt = wire::decode_client_packet(wire::build_client_hello(5, wire::VersionTag::from("Q035"), 1200, chlo));
    return std::get<wire::HandshakePacket>(wire::decode_server_response(respond(p, pkt, rng).payload)).message;
  };
  auto first = send();
  EXPECT_FALSE(first.has(wire::tags::CRT));
  chlo.set(wire::tags::STK, *first.find(wire::tags::STK));
  EXPECT_TRUE(send().has(wire::tags::CRT));
}

TEST(Responder, ServesOverLoopbackAndLogs) {
  ResponderProfile p;
  p.supported_versions = {wire::VersionTag::from("Q039")};
  auto r = Responder::serve(p, {*net::IpAddress::parse("127.0.0.1"), 0});
  auto reply = Exchange(r->local_endpoint(), wire::build_probe_chlo(0xabc, wire::VersionTag::from("?123")), 2s);
  ASSERT_TRUE(reply);
  auto* vn = std::get_if<wire::VersionNegotiationPacket>(&*reply);
  ASSERT_NE(vn, nullptr);
  EXPECT_EQ(vn->connection_id, 0xabcu);

  auto log = r->shutdown();
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log[0].action, Action::VersionNegotiation);
  ASSERT_TRUE(log[0].inbound);
  EXPECT_EQ(log[0].inbound->header.connection_id, 0xabcu);
  EXPECT_EQ(r->shutdown().size(), 1u);
}

TEST(Responder, RepliesFromDestinationAddress) {
  auto r = Responder::serve(ResponderProfile{}, {*net::IpAddress::parse("0.0.0.0"), 0});
  for (const char* addr : {"127.0.0.9", "127.3.2.1"}) {
    net::Endpoint target{*net::IpAddress::parse(addr), r->port()};
    // Connected-style check: the reply source must equal the target.
    net::UdpSocket s(net::Family::V4);
    s.bind({*net::IpAddress::parse("127.0.0.1"), 0});
    s.send_to(target, wire::build_probe_chlo(1, wire::VersionTag::from("?123")));
    ASSERT_TRUE(s.wait_readable(2s));
    std::vector<std::uint8_t> buf(2048);
    auto d = s.recv_from(buf);
    ASSERT_TRUE(d);
    EXPECT_EQ(d->peer, target);
  }
  EXPECT_EQ(r->shutdown().size(), 2u);
}

TEST(Responder, DelayAndDrop) {
  ResponderProfile delayed;
  delayed.reply_delay = 150ms;
  auto r = Responder::serve(delayed, {*net::IpAddress::parse("127.0.0.1"), 0});
  auto t0 = std::chrono::steady_clock::now();
  auto reply = Exchange(r->local_endpoint(), wire::build_probe_chlo(1, wire::VersionTag::from("?123")), 2s);
  EXPECT_TRUE(reply);
  EXPECT_GE(std::chrono::steady_clock::now() - t0, 140ms);
  r->shutdown();

  ResponderProfile lossy;
  lossy.drop_probability = 1.0;
  auto r2 = Responder::serve(lossy, {*net::IpAddress::parse("127.0.0.1"), 0});
  EXPECT_FALSE(Exchange(r2->local_endpoint(), wire::build_probe_chlo(1, wire::VersionTag::from("?123")), 200ms));
  auto log = r2->shutdown();
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log[0].action, Action::Dropped);
}

TEST(Responder, ProfileByConnectionIdRange) {
  ResponderProfile reset;
  reset.name = "reset";
  reset.behavior = Behavior::Reset;
  reset.cid_range = {{0x100, 0x1ff}};
  ResponderProfile vn;
  vn.name = "vn";
  auto r = Responder::serve({reset, vn}, {*net::IpAddress::parse("127.0.0.1"), 0});
  auto a = Exchange(r->local_endpoint(), wire::build_probe_chlo(0x150, wire::VersionTag::from("?123")), 2s);
  auto b = Exchange(r->local_endpoint(), wire::build_probe_chlo(0x250, wire::VersionTag::from("?123")), 2s);
  ASSERT_TRUE(a && b);
  EXPECT_TRUE(std::holds_alternative<wire::PublicResetPacket>(*a));
  EXPECT_TRUE(std::holds_alternative<wire::VersionNegotiationPacket>(*b));
  auto log = r->shutdown();
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[0].profile, "reset");
  EXPECT_EQ(log[1].profile, "vn");
}

TEST(Profiles, ParseFile) {
  auto profiles = parse_profiles(R"(
# default section
behavior = serve_rej
versions = Q035,Q039
sni_required = true
reply_delay_ms = 25
cert.example.com = @selfsigned

[profile quiet]
behavior = silent
cid_range = 0000000000000010-00000000000000ff
)");
  ASSERT_EQ(profiles.size(), 2u);
  EXPECT_EQ(profiles[0].behavior, Behavior::ServeRej);
  EXPECT_EQ(profiles[0].supported_versions.size(), 2u);
  EXPECT_TRUE(profiles[0].sni_required);
  EXPECT_EQ(profiles[0].reply_delay, 25ms);
  EXPECT_TRUE(profiles[0].scfg);
  EXPECT_NE(profiles[0].chain_for("example.com"), nullptr);
  EXPECT_EQ(profiles[0].chain_for("other.com"), nullptr);
  EXPECT_EQ(profiles[1].name, "quiet");
  EXPECT_EQ(profiles[1].behavior, Behavior::Silent);
  EXPECT_EQ(profiles[1].cid_range->second, 0xffu);

  EXPECT_THROW(parse_profiles("behavior = sing\n"), Error);
  EXPECT_THROW(parse_profiles("drop_probability = 1.5\n"), Error);
  EXPECT_THROW(parse_profiles("versions = 035\n"), Error);
}

}  // namespace
}  // namespace qr::mock
