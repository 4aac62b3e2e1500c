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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "common/error.hpp"

namespace qr::wire {

// A 4-octet ASCII tag. Ordering follows the little-endian uint32 value, which
// is the order entries must appear in on the wire.
struct Tag {
  std::uint32_t value = 0;

  // Short names are zero-padded on the right: "SNI" -> 'S','N','I',0x00.
  static constexpr Tag from(std::string_view name) {
    if (name.size() > 4) throw Error(Errc::InvalidArgument, "tag longer than 4 octets");
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < name.size(); ++i) v |= std::uint32_t{static_cast<std::uint8_t>(name[i])} << (8 * i);
    return Tag{v};
  }

  std::string name() const;  // printable form, trailing NULs dropped, other bytes as \xNN

  auto operator<=>(const Tag&) const = default;
};

namespace tags {
inline constexpr Tag CHLO = Tag::from("CHLO");
inline constexpr Tag REJ = Tag::from("REJ");
inline constexpr Tag SHLO = Tag::from("SHLO");
inline constexpr Tag SCFG = Tag::from("SCFG");
inline constexpr Tag PRST = Tag::from("PRST");
inline constexpr Tag SNI = Tag::from("SNI");
inline constexpr Tag VER = Tag::from("VER");
inline constexpr Tag PDMD = Tag::from("PDMD");
inline constexpr Tag PAD = Tag::from("PAD");
inline constexpr Tag SCID = Tag::from("SCID");
inline constexpr Tag STK = Tag::from("STK");
inline constexpr Tag KEXS = Tag::from("KEXS");
inline constexpr Tag AEAD = Tag::from("AEAD");
inline constexpr Tag PUBS = Tag::from("PUBS");
inline constexpr Tag EXPY = Tag::from("EXPY");
inline constexpr Tag CRT = Tag::from("CRT");
inline constexpr Tag PROF = Tag::from("PROF");
inline constexpr Tag SNO = Tag::from("SNO");
inline constexpr Tag RNON = Tag::from("RNON");
inline constexpr Tag RSEQ = Tag::from("RSEQ");
inline constexpr Tag X509 = Tag::from("X509");
}  // namespace tags

}  // namespace qr::wire
