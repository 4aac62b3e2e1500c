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

#include "wire/packets.hpp"

namespace qr::wire {

namespace {

std::uint8_t width_bits(std::uint8_t width) {
  switch (width) {
    case 1: return 0x00;
    case 2: return 0x10;
    case 4: return 0x20;
    case 6: return 0x30;
  }
  fail(Errc::InvalidArgument, "packet number width must be 1, 2, 4 or 6");
}

std::uint8_t width_from_bits(std::uint8_t f) {
  static constexpr std::uint8_t kWidths[] = {1, 2, 4, 6};
  return kWidths[(f & flags::kPacketNumberMask) >> 4];
}

VersionTag read_version(ByteReader& r) {
  auto b = r.take(4);
  return VersionTag({b[0], b[1], b[2], b[3]});
}

}  // namespace

std::uint8_t PublicHeader::flags() const {
  std::uint8_t f = width_bits(packet_number_width);
  if (version) f |= flags::kVersion;
  if (connection_id) f |= flags::kConnectionId;
  return f;
}

void encode_public_header(const PublicHeader& h, ByteWriter& w) {
  auto f = h.flags();
  if (h.packet_number_width < 8 && (h.packet_number >> (8 * h.packet_number_width)) != 0)
    fail(Errc::InvalidArgument, "packet number does not fit its encoded width");
  w.u8(f);
  if (h.connection_id) w.u64(*h.connection_id);
  if (h.version) w.raw(h.version->bytes());
  w.le(h.packet_number, h.packet_number_width);
}

Bytes encode_public_header(const PublicHeader& h) {
  ByteWriter w;
  encode_public_header(h, w);
  return w.take();
}

PublicHeader decode_public_header(ByteReader& r) {
  auto f = r.u8();
  if (f & flags::kReserved) fail(Errc::UnknownLayout, "reserved public flag bits set");
  if (f & flags::kReset) fail(Errc::UnknownLayout, "public reset flag on a regular packet");
  PublicHeader h;
  if (f & flags::kConnectionId) h.connection_id = r.u64();
  if (f & flags::kVersion) h.version = read_version(r);
  h.packet_number_width = width_from_bits(f);
  h.packet_number = r.le(h.packet_number_width);
  return h;
}

Bytes encode_version_negotiation(const VersionNegotiationPacket& p) {
  if (p.versions.empty()) fail(Errc::InvalidArgument, "version negotiation needs at least one version");
  ByteWriter w;
  w.u8(flags::kVersion | flags::kConnectionId);
  w.u64(p.connection_id);
  for (const auto& v : p.versions) w.raw(v.bytes());
  return w.take();
}

Bytes encode_public_reset(const PublicResetPacket& p) {
  if (!p.body_valid || p.body.message_tag != tags::PRST)
    fail(Errc::InvalidArgument, "public reset body must be a PRST message");
  ByteWriter w;
  w.u8(flags::kReset | flags::kConnectionId);
  w.u64(p.connection_id);
  w.raw(encode_handshake_message(p.body));
  return w.take();
}

Bytes encode_handshake_packet(const HandshakePacket& p) {
  ByteWriter w;
  encode_public_header(p.header, w);
  w.raw(encode_handshake_message(p.message));
  return w.take();
}

ServerResponse decode_server_response(ByteView data) noexcept {
  try {
    if (data.empty()) return Malformed{"empty datagram"};
    const std::uint8_t f = data[0];
    if (f & flags::kReserved) return Malformed{"reserved public flag bits set"};

    if (f & flags::kReset) {
      // A reset header carries exactly the reset and connection-id flags.
      if (f != (flags::kReset | flags::kConnectionId)) return Malformed{"unexpected flags on public reset"};
      if (data.size() < 9) return Malformed{"public reset shorter than its header"};
      ByteReader r(data);
      r.u8();
      PublicResetPacket p;
      p.connection_id = r.u64();
      try {
        p.body = decode_handshake_message(r.rest());
        p.body_valid = p.body.message_tag == tags::PRST;
      } catch (const Error&) {
        p.body_valid = false;
      }
      if (!p.body_valid) p.body = HandshakeMessage{};
      return p;
    }

    if (f & flags::kVersion) {
      if (f != (flags::kVersion | flags::kConnectionId)) return Malformed{"unexpected flags on version negotiation"};
      ByteReader r(data);
      r.u8();
      if (r.remaining() < 8) return Malformed{"version negotiation shorter than its header"};
      VersionNegotiationPacket p;
      p.connection_id = r.u64();
      if (r.remaining() == 0 || r.remaining() % 4 != 0) return Malformed{"version list is not a non-empty multiple of 4"};
      while (!r.empty()) {
        auto v = read_version(r);
        if (!v.is_recognized()) return Malformed{"unrecognized version in negotiation list"};
        p.versions.push_back(v);
      }
      return p;
    }

    ByteReader r(data);
    HandshakePacket p;
    p.header = decode_public_header(r);
    p.message = decode_handshake_message(r.rest());
    return p;
  } catch (const Error& e) {
    return Malformed{e.what()};
  } catch (...) {
    return Malformed{"undecodable"};
  }
}

HandshakePacket decode_client_packet(ByteView data) {
  ByteReader r(data);
  HandshakePacket p;
  p.header = decode_public_header(r);
  if (!p.header.version) fail(Errc::UnknownLayout, "client packet without version");
  p.message = decode_handshake_message(r.rest());
  return p;
}

Bytes build_client_hello(std::uint64_t connection_id, const VersionTag& version, std::size_t pad_to,
                         HandshakeMessage chlo) {
  if (pad_to > kMaxPadTarget) fail(Errc::InvalidArgument, "pad target above " + std::to_string(kMaxPadTarget));
  chlo.message_tag = tags::CHLO;
  chlo.set(tags::VER, Bytes(version.bytes().begin(), version.bytes().end()));
  chlo.set(tags::PAD, {});

  HandshakePacket packet;
  packet.header.connection_id = connection_id;
  packet.header.version = version;
  packet.header.packet_number = 1;
  packet.header.packet_number_width = 1;

  packet.message = chlo;
  auto base = encode_handshake_packet(packet).size();
  if (base > pad_to)
    fail(Errc::PadTooSmall, "mandatory fields need " + std::to_string(base) + " octets, pad target is " +
                                std::to_string(pad_to));
  packet.message.set(tags::PAD, Bytes(pad_to - base, kPadOctet));
  return encode_handshake_packet(packet);
}

Bytes build_probe_chlo(std::uint64_t connection_id, const VersionTag& version, std::size_t pad_to,
                       std::string_view sni) {
  HandshakeMessage chlo;
  chlo.message_tag = tags::CHLO;
  if (!sni.empty()) chlo.set(tags::SNI, to_bytes(sni));
  return build_client_hello(connection_id, version, pad_to, std::move(chlo));
}

const char* response_kind(const ServerResponse& r) {
  switch (r.index()) {
    case 0: return "version_negotiation";
    case 1: return "public_reset";
    case 2: return "handshake";
    default: return "malformed";
  }
}

}  // namespace qr::wire
