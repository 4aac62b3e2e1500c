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

#include "wire/version_tag.hpp"

#include "common/error.hpp"
#include "wire/tag.hpp"

namespace qr::wire {

std::string Tag::name() const {
  std::string out;
  std::string bytes;
  for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
  while (!bytes.empty() && bytes.back() == '\0') bytes.pop_back();
  for (char c : bytes) {
    auto u = static_cast<unsigned char>(c);
    if (u >= 0x20 && u < 0x7f) {
      out.push_back(c);
    } else {
      static constexpr char kHex[] = "0123456789abcdef";
      out += "\\x";
      out.push_back(kHex[u >> 4]);
      out.push_back(kHex[u & 0xf]);
    }
  }
  return out;
}

VersionTag VersionTag::from(std::string_view text) {
  if (text.size() != 4) fail(Errc::InvalidArgument, "version tag must be 4 octets: '" + std::string(text) + "'");
  std::array<std::uint8_t, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<std::uint8_t>(text[i]);
  return VersionTag(b);
}

bool VersionTag::is_recognized() const {
  if (bytes_[0] != 'Q') return false;
  for (int i = 1; i < 4; ++i)
    if (bytes_[i] < '0' || bytes_[i] > '9') return false;
  return true;
}

std::optional<int> VersionTag::number() const {
  if (!is_recognized()) return std::nullopt;
  return (bytes_[1] - '0') * 100 + (bytes_[2] - '0') * 10 + (bytes_[3] - '0');
}

std::uint32_t VersionTag::wire_value() const {
  return std::uint32_t{bytes_[0]} | (std::uint32_t{bytes_[1]} << 8) | (std::uint32_t{bytes_[2]} << 16) |
         (std::uint32_t{bytes_[3]} << 24);
}

std::string VersionTag::to_string() const { return Tag{wire_value()}.name(); }

VersionTag make_unsupported_version(std::string_view text) {
  auto v = VersionTag::from(text);
  if (v.is_recognized()) fail(Errc::InvalidArgument, "probe version '" + std::string(text) + "' matches the Qnnn pattern");
  return v;
}

}  // namespace qr::wire
