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

#include <optional>
#include <vector>

#include "common/bytes.hpp"
#include "wire/tag.hpp"

namespace qr::wire {

struct HandshakeEntry {
  Tag tag;
  Bytes value;

  bool operator==(const HandshakeEntry&) const = default;
};

// Tag-value crypto handshake message (CHLO, REJ, SHLO, SCFG, PRST).
// `entries` must be strictly ascending by tag to be encodable.
struct HandshakeMessage {
  Tag message_tag;
  std::vector<HandshakeEntry> entries;

  const Bytes* find(Tag tag) const;
  bool has(Tag tag) const { return find(tag) != nullptr; }
  // Inserts or replaces, keeping entries sorted.
  void set(Tag tag, Bytes value);
  void erase(Tag tag);

  bool operator==(const HandshakeMessage&) const = default;
};

// Layout: message tag (4) | entry count (u16 LE) | 0x0000 |
//         count x (tag (4) | end offset (u32 LE)) | values...
// Throws UnsortedTags, OversizeValue.
Bytes encode_handshake_message(const HandshakeMessage& m);

// Strict inverse of encode_handshake_message: rejects trailing octets,
// non-zero padding and out-of-order tags. Throws Truncated,
// NonMonotonicOffsets, UnknownLayout.
HandshakeMessage decode_handshake_message(ByteView data);

inline constexpr std::size_t kHandshakeHeaderSize = 8;
inline constexpr std::size_t kHandshakeEntrySize = 8;

}  // namespace qr::wire
