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
#include <variant>
#include <vector>

#include "common/bytes.hpp"
#include "wire/handshake_message.hpp"
#include "wire/version_tag.hpp"

namespace qr::wire {

namespace flags {
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::uint8_t kReset = 0x02;
inline constexpr std::uint8_t kReserved = 0x04 | 0x40 | 0x80;
inline constexpr std::uint8_t kConnectionId = 0x08;
inline constexpr std::uint8_t kPacketNumberMask = 0x30;
}  // namespace flags

// Header of a regular (non-reset, non-negotiation) packet.
struct PublicHeader {
  std::optional<std::uint64_t> connection_id;
  std::optional<VersionTag> version;
  std::uint64_t packet_number = 1;
  // Encoded width in octets: 1, 2, 4 or 6.
  std::uint8_t packet_number_width = 1;

  std::uint8_t flags() const;
  bool operator==(const PublicHeader&) const = default;
};

// Throws InvalidArgument on an unsupported width or a packet number that
// does not fit it.
void encode_public_header(const PublicHeader& h, ByteWriter& w);
Bytes encode_public_header(const PublicHeader& h);
// Throws Truncated or UnknownLayout (reserved bits, reset flag).
PublicHeader decode_public_header(ByteReader& r);

struct VersionNegotiationPacket {
  std::uint64_t connection_id = 0;
  std::vector<VersionTag> versions;

  bool operator==(const VersionNegotiationPacket&) const = default;
};

struct PublicResetPacket {
  std::uint64_t connection_id = 0;
  HandshakeMessage body;
  // False when the reset header was well formed but the PRST body was not;
  // `body` is then empty.
  bool body_valid = true;

  bool operator==(const PublicResetPacket&) const = default;
};

// A regular packet carrying one handshake message (client CHLO, server REJ).
struct HandshakePacket {
  PublicHeader header;
  HandshakeMessage message;

  bool operator==(const HandshakePacket&) const = default;
};

struct Malformed {
  std::string reason;

  bool operator==(const Malformed&) const = default;
};

using ServerResponse = std::variant<VersionNegotiationPacket, PublicResetPacket, HandshakePacket, Malformed>;

// Throws InvalidArgument when `versions` is empty.
Bytes encode_version_negotiation(const VersionNegotiationPacket& p);
// Throws InvalidArgument unless the body is a valid PRST message.
Bytes encode_public_reset(const PublicResetPacket& p);
Bytes encode_handshake_packet(const HandshakePacket& p);

// Total: every input maps to exactly one alternative, never throws.
ServerResponse decode_server_response(ByteView data) noexcept;

// Client -> server packet (version flag set, CHLO body). Throws on any
// framing error.
HandshakePacket decode_client_packet(ByteView data);

inline constexpr std::size_t kDefaultPadTarget = 1200;
inline constexpr std::size_t kMaxPadTarget = 1350;
inline constexpr std::uint8_t kPadOctet = '-';

// Builds a client packet whose UDP payload is exactly `pad_to` octets: the
// CHLO carries `chlo` entries plus VER and PAD. Throws PadTooSmall,
// InvalidArgument (pad_to > 1350).
Bytes build_client_hello(std::uint64_t connection_id, const VersionTag& version, std::size_t pad_to,
                         HandshakeMessage chlo);

// Minimal probe: VER, PAD and optionally SNI.
Bytes build_probe_chlo(std::uint64_t connection_id, const VersionTag& version, std::size_t pad_to = kDefaultPadTarget,
                       std::string_view sni = {});

const char* response_kind(const ServerResponse& r);

}  // namespace qr::wire
