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

#include <random>

#include "common/bytes.hpp"
#include "support/generators.hpp"
#include "wire/cert_chain.hpp"
#include "wire/packets.hpp"
#include "wire/server_config.hpp"

namespace qr::wire {
namespace {

// Hand-encoded: tag | count=2 | pad | SNI end=11 | VER end=15 | values.
constexpr char kChloFixture[] =
    "43484c4f02000000534e49000b000000564552000f0000006578616d706c652e636f6d51303335";

TEST(VersionTagTest, Recognition) {
  EXPECT_TRUE(VersionTag::from("Q035").is_recognized());
  EXPECT_EQ(VersionTag::from("Q039").number(), 39);
  EXPECT_FALSE(VersionTag::from("?123").is_recognized());
  EXPECT_FALSE(VersionTag::from("Q03a").is_recognized());
  EXPECT_FALSE(VersionTag::from("q035").is_recognized());
  EXPECT_FALSE(make_unsupported_version().is_recognized());
  EXPECT_THROW(make_unsupported_version("Q999"), Error);
  EXPECT_THROW(VersionTag::from("Q35"), Error);
}

TEST(TagTest, ShortTagsAreZeroPadded) {
  EXPECT_EQ(tags::SNI.value, 0x00494e53u);
  EXPECT_EQ(tags::SNI.name(), "SNI");
  EXPECT_LT(tags::PAD, tags::SNI);
  EXPECT_LT(tags::SNI, tags::VER);
}

TEST(HandshakeMessageTest, EmptyChloIsEightOctets) {
  HandshakeMessage m{tags::CHLO, {}};
  EXPECT_EQ(hex_encode(encode_handshake_message(m)), "43484c4f00000000");
}

TEST(HandshakeMessageTest, ChloFixture) {
  HandshakeMessage m{tags::CHLO, {}};
  m.set(tags::VER, to_bytes("Q035"));
  m.set(tags::SNI, to_bytes("example.com"));
  EXPECT_EQ(hex_encode(encode_handshake_message(m)), kChloFixture);
  EXPECT_EQ(decode_handshake_message(hex_decode(kChloFixture)), m);
}

TEST(HandshakeMessageTest, UnsortedTagsRejected) {
  HandshakeMessage m{tags::CHLO, {{tags::VER, {}}, {tags::SNI, {}}}};
  try {
    encode_handshake_message(m);
    FAIL() << "expected UnsortedTags";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnsortedTags);
  }
  HandshakeMessage dup{tags::CHLO, {{tags::SNI, {}}, {tags::SNI, {}}}};
  EXPECT_THROW(encode_handshake_message(dup), Error);
}

Errc decode_error(const Bytes& b) {
  try {
    decode_handshake_message(b);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc{};
}

TEST(HandshakeMessageTest, DecodeErrors) {
  auto good = hex_decode(kChloFixture);
  auto truncated = good;
  truncated.resize(good.size() - 3);
  EXPECT_EQ(decode_error(truncated), Errc::Truncated);
  EXPECT_EQ(decode_error(Bytes(good.begin(), good.begin() + 5)), Errc::Truncated);

  auto trailing = good;
  trailing.push_back(0);
  EXPECT_EQ(decode_error(trailing), Errc::UnknownLayout);

  auto bad_pad = good;
  bad_pad[6] = 1;
  EXPECT_EQ(decode_error(bad_pad), Errc::UnknownLayout);

  auto non_monotonic = good;
  non_monotonic[12] = 0x10;  // first end offset 16 > second (15)
  EXPECT_EQ(decode_error(non_monotonic), Errc::NonMonotonicOffsets);
}

TEST(HandshakeMessageTest, RandomRoundTripAndCanonical) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    auto m = test::random_message(rng, tags::CHLO);
    auto bytes = encode_handshake_message(m);
    auto back = decode_handshake_message(bytes);
    ASSERT_EQ(back, m);
    ASSERT_EQ(encode_handshake_message(back), bytes);
  }
}

TEST(PublicHeaderTest, RoundTripAndWidthFlags) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    auto h = test::random_header(rng, rng() % 2);
    auto bytes = encode_public_header(h);
    ByteReader r(bytes);
    ASSERT_EQ(decode_public_header(r), h);
    ASSERT_TRUE(r.empty());
    ASSERT_EQ((bytes[0] & flags::kVersion) != 0, h.version.has_value());
  }
  PublicHeader h;
  h.packet_number_width = 3;
  EXPECT_THROW(encode_public_header(h), Error);
  h.packet_number_width = 1;
  h.packet_number = 256;
  EXPECT_THROW(encode_public_header(h), Error);
}

TEST(VersionNegotiationTest, FixtureAndLengthLaw) {
  VersionNegotiationPacket p{0x0102030405060708ull, {VersionTag::from("Q035"), VersionTag::from("Q034")}};
  auto bytes = encode_version_negotiation(p);
  EXPECT_EQ(hex_encode(bytes), "0908070605040302015130333551303334");
  auto r = decode_server_response(bytes);
  ASSERT_TRUE(std::holds_alternative<VersionNegotiationPacket>(r));
  EXPECT_EQ(std::get<VersionNegotiationPacket>(r), p);

  VersionNegotiationPacket one{1, {VersionTag::from("Q035")}};
  for (std::size_t n = 1; n <= 16; ++n) {
    VersionNegotiationPacket many{1, std::vector<VersionTag>(n, VersionTag::from("Q035"))};
    EXPECT_EQ(encode_version_negotiation(many).size() - encode_version_negotiation(one).size(), 4 * (n - 1));
  }
  EXPECT_THROW(encode_version_negotiation(VersionNegotiationPacket{1, {}}), Error);
}

TEST(PublicResetTest, DecodesWithBodyValidity) {
  PublicResetPacket p;
  p.connection_id = 42;
  p.body.message_tag = tags::PRST;
  p.body.set(tags::RNON, Bytes(8, 1));
  auto r = decode_server_response(encode_public_reset(p));
  ASSERT_TRUE(std::holds_alternative<PublicResetPacket>(r));
  EXPECT_EQ(std::get<PublicResetPacket>(r), p);

  Bytes garbage_body = {0x0a, 1, 2, 3, 4, 5, 6, 7, 8, 0xde, 0xad};
  auto g = decode_server_response(garbage_body);
  ASSERT_TRUE(std::holds_alternative<PublicResetPacket>(g));
  EXPECT_FALSE(std::get<PublicResetPacket>(g).body_valid);
}

TEST(ServerResponseTest, RandomGarbageWithoutResetIsMalformed) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 5000; ++i) {
    auto b = test::random_bytes(rng, 100);
    b[0] &= static_cast<std::uint8_t>(~flags::kReset);
    ASSERT_TRUE(std::holds_alternative<Malformed>(decode_server_response(b))) << hex_encode(b);
  }
  EXPECT_TRUE(std::holds_alternative<Malformed>(decode_server_response(Bytes{})));
}

TEST(ServerResponseTest, ServerHandshakePacket) {
  HandshakePacket p;
  p.header.connection_id = 9;
  p.message.message_tag = tags::REJ;
  p.message.set(tags::STK, Bytes(5, 7));
  auto r = decode_server_response(encode_handshake_packet(p));
  ASSERT_TRUE(std::holds_alternative<HandshakePacket>(r));
  EXPECT_EQ(std::get<HandshakePacket>(r), p);
}

TEST(ProbeChloTest, ExactLength) {
  auto unsupported = make_unsupported_version();
  auto pkt = build_probe_chlo(0, unsupported, 1200);
  EXPECT_EQ(pkt.size(), 1200u);
  auto decoded = decode_client_packet(pkt);
  ASSERT_TRUE(decoded.header.version);
  EXPECT_FALSE(decoded.header.version->is_recognized());
  EXPECT_TRUE(decoded.message.has(tags::PAD));
  EXPECT_EQ(*decoded.message.find(tags::VER), to_bytes("?123"));

  auto with_sni = build_probe_chlo(5, VersionTag::from("Q035"), 1350, "example.com");
  EXPECT_EQ(with_sni.size(), 1350u);
  EXPECT_EQ(*decode_client_packet(with_sni).message.find(tags::SNI), to_bytes("example.com"));
}

TEST(ProbeChloTest, PadBounds) {
  try {
    build_probe_chlo(0, make_unsupported_version(), 20);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PadTooSmall);
  }
  EXPECT_THROW(build_probe_chlo(0, make_unsupported_version(), 1351), Error);
  // Smallest payload: 14-octet header + 8 + 2 entries x 8 + 4-octet VER.
  EXPECT_EQ(build_probe_chlo(0, make_unsupported_version(), 42).size(), 42u);
  EXPECT_THROW(build_probe_chlo(0, make_unsupported_version(), 41), Error);
}

TEST(ServerConfigTest, RoundTripAndInvariants) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    auto c = test::random_server_config(rng);
    auto bytes = encode_server_config(c);
    auto back = decode_server_config(bytes);
    ASSERT_EQ(back, c);
    ASSERT_EQ(encode_server_config(back), bytes);
  }
  ServerConfig bad = test::random_server_config(rng);
  bad.pubs.pop_back();
  EXPECT_THROW(encode_server_config(bad), Error);
  bad = test::random_server_config(rng);
  bad.expy = 0;
  EXPECT_THROW(encode_server_config(bad), Error);
}

TEST(CertChainTest, RejectsNonCertificates) {
  CertificateChain chain{{Bytes{0x30, 0x03, 0x02, 0x01, 0x01}}};
  EXPECT_THROW(decode_cert_chain(encode_cert_chain(chain, CertEncoding::Raw)), Error);
  EXPECT_THROW(decode_cert_chain(encode_cert_chain(chain, CertEncoding::Zlib)), Error);
  EXPECT_THROW(decode_cert_chain(Bytes{0x00}), Error);
}

TEST(CertChainTest, CachedEntriesAreUnsupported) {
  Bytes crt = {0x02, 1, 2, 3, 4, 5, 6, 7, 8, 0x00};
  auto d = decode_cert_chain(crt);
  EXPECT_TRUE(d.unsupported_compression);
  EXPECT_FALSE(d.chain);
}

}  // namespace
}  // namespace qr::wire
