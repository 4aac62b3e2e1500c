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

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "common/bytes.hpp"
#include "common/time_util.hpp"
#include "handshake/certificates.hpp"
#include "net/address.hpp"
#include "wire/cert_chain.hpp"
#include "wire/packets.hpp"
#include "wire/server_config.hpp"

namespace qr::handshake {

enum class HandshakeStatus { QuicEnabled, VersionFailed, ProtocolError, Timeout };

const char* status_name(HandshakeStatus s);
std::optional<HandshakeStatus> parse_status(std::string_view s);

// Q039 down to Q030.
std::vector<wire::VersionTag> default_fallback_versions();

struct HandshakeParams {
  std::string sni;  // empty: no SNI tag
  wire::VersionTag version = wire::VersionTag::from(wire::kDefaultClientVersion);
  unsigned max_rounds = 3;
  // Wait for each reply.
  std::chrono::microseconds timeout = std::chrono::seconds(12);
  // Versions the client is willing to switch to after a negotiation packet,
  // in addition to `version`.
  std::vector<wire::VersionTag> fallback_versions = default_fallback_versions();
  std::size_t pad_to = wire::kDefaultPadTarget;
  // Throws InvalidArgument.
  void validate() const;
};

enum class Direction { Sent, Received };

struct TraceEvent {
  Direction direction;
  SystemTime timestamp;
  std::string kind;  // chlo, rej, shlo, version_negotiation, public_reset, malformed, unexpected
  Bytes raw;
  std::optional<wire::HandshakeMessage> message;  // decoded CHLO/REJ/PRST body
  std::vector<wire::VersionTag> versions;          // negotiation packets
  std::string note;
};

struct HandshakeTrace {
  std::vector<TraceEvent> events;
};

struct HandshakeResult {
  HandshakeStatus status = HandshakeStatus::Timeout;
  std::optional<wire::VersionTag> negotiated_version;
  std::optional<wire::ServerConfig> scfg;
  std::optional<wire::CertificateChain> certs;
  std::optional<Bytes> source_token;
  // CRT present but compressed with a scheme this client does not decode.
  bool unsupported_compression = false;
  // Versions listed by the server in a negotiation packet, if any.
  std::vector<wire::VersionTag> server_versions;
  unsigned chlo_sent = 0;
  std::chrono::microseconds rtt{0};  // first reply
  HandshakeTrace trace;
};

HandshakeResult perform_handshake(const net::Endpoint& target, const HandshakeParams& params);

// {"host","sni","status","version","scid_hex","cert_fingerprints","cert_valid","rtt_ms","leaf_cn"}
// `cert_valid` is null when no verdict was computed.
std::string handshake_to_jsonl(const std::string& host, const net::Endpoint& target, const HandshakeParams& params,
                               const HandshakeResult& r, std::optional<CertVerdict> verdict);

struct GrabRecord {
  std::string host;
  std::string status;
  std::vector<std::string> cert_fingerprints;
  std::string leaf_cn;
  std::optional<bool> cert_valid;
};
// Throws MalformedRecord.
GrabRecord grab_record_from_jsonl(std::string_view line);

}  // namespace qr::handshake
