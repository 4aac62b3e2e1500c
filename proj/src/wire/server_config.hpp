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

#include <array>
#include <cstdint>
#include <vector>

#include "common/bytes.hpp"
#include "wire/handshake_message.hpp"
#include "wire/version_tag.hpp"

namespace qr::wire {

struct ServerConfig {
  std::array<std::uint8_t, 16> scid{};
  std::vector<Tag> kexs;
  std::vector<Tag> aead;
  std::vector<Bytes> pubs;  // one public value per key-exchange method
  std::uint64_t expy = 0;   // expiry, seconds since epoch
  std::vector<VersionTag> vers;

  bool operator==(const ServerConfig&) const = default;
};

// SCFG message: AEAD/KEXS/VER as concatenated 4-octet tags, EXPY as u64 LE,
// PUBS as a sequence of (u24 LE length, value), SCID as 16 octets.
// Throws InvalidArgument when |pubs| != |kexs|, expy == 0 or a public value
// exceeds 2^24-1 octets.
HandshakeMessage server_config_message(const ServerConfig& c);
Bytes encode_server_config(const ServerConfig& c);

// Throws ParseError on any structural violation of the SCFG layout.
ServerConfig server_config_from_message(const HandshakeMessage& m);
ServerConfig decode_server_config(ByteView data);

}  // namespace qr::wire
