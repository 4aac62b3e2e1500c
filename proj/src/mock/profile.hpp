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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wire/cert_chain.hpp"
#include "wire/server_config.hpp"
#include "wire/version_tag.hpp"

namespace qr::mock {

enum class Behavior { Negotiate, Reset, Silent, Malformed, ServeRej };

const char* behavior_name(Behavior b);
std::optional<Behavior> parse_behavior(std::string_view text);

struct ResponderProfile {
  std::string name = "default";
  std::vector<wire::VersionTag> supported_versions{wire::VersionTag::from("Q035")};
  Behavior behavior = Behavior::Negotiate;
  bool sni_required = false;
  std::optional<wire::ServerConfig> scfg;
  // Hostname -> chain. "*" names the chain served when SNI is absent or
  // unknown and SNI is not required.
  std::map<std::string, wire::CertificateChain> cert_inventory;
  std::chrono::milliseconds reply_delay{0};
  double drop_probability = 0.0;

  Bytes source_token = to_bytes("quic-recon-stk");
  // Withhold CRT until the client echoes the source token.
  bool require_stk = false;
  wire::CertEncoding crt_encoding = wire::CertEncoding::Zlib;
  // Scripted reply for Behavior::Malformed; when empty, 64 random octets with
  // a reserved public-flag bit set.
  Bytes malformed_payload;
  // Inclusive connection-id range this profile answers for; unset = default.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> cid_range;
  std::uint64_t seed = 1;

  // Throws ConfigInvalid.
  void validate() const;
  // Chain for a CHLO's SNI per the inventory rules above; nullptr = no CRT.
  const wire::CertificateChain* chain_for(std::string_view sni) const;
};

// key = value lines; "[profile NAME]" starts an additional profile. Relative
// certificate paths resolve against the file's directory. The value
// "@selfsigned" for cert.<host> issues a fresh self-signed certificate.
// Throws ConfigInvalid / IoError.
std::vector<ResponderProfile> load_profiles(const std::string& path);
std::vector<ResponderProfile> parse_profiles(std::string_view text, const std::string& base_dir = ".");

}  // namespace qr::mock
