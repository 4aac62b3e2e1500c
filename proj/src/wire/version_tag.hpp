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
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qr::wire {

class VersionTag {
 public:
  VersionTag() = default;
  explicit VersionTag(std::array<std::uint8_t, 4> bytes) : bytes_(bytes) {}
  // Exactly four characters; throws InvalidArgument otherwise.
  static VersionTag from(std::string_view text);

  // 'Q' followed by three ASCII digits.
  bool is_recognized() const;
  // Numeric part of a recognized tag ("Q035" -> 35).
  std::optional<int> number() const;

  const std::array<std::uint8_t, 4>& bytes() const { return bytes_; }
  std::uint32_t wire_value() const;
  std::string to_string() const;

  auto operator<=>(const VersionTag&) const = default;

 private:
  std::array<std::uint8_t, 4> bytes_{};
};

inline constexpr std::string_view kDefaultProbeVersion = "?123";
inline constexpr std::string_view kDefaultClientVersion = "Q035";

// Probe tag that no server can support. Throws InvalidArgument if `text`
// would be recognized as a real version.
VersionTag make_unsupported_version(std::string_view text = kDefaultProbeVersion);

}  // namespace qr::wire
