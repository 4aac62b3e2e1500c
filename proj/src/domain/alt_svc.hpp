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
#include <string_view>
#include <vector>

#include "domain/http_fetch.hpp"

namespace qr::domain {

enum class AltSvcSource { Http, Https };

struct AltSvcEntry {
  std::string protocol_id;  // percent-decoded, e.g. "quic", "h2", "h3-29"
  std::string host;         // empty: same host
  std::uint16_t port = 0;
  std::vector<std::string> versions;  // from v="..."
  std::optional<std::uint64_t> max_age;
};

struct AltSvcAdvertisement {
  AltSvcSource source = AltSvcSource::Https;
  std::vector<AltSvcEntry> protocols;
  bool clear = false;  // "Alt-Svc: clear"
};

// Parses one Alt-Svc field value. Malformed alternatives are skipped.
std::vector<AltSvcEntry> parse_alt_svc(std::string_view value, bool* clear = nullptr);

// True when a quic alternative advertises `version` (as "39" or "Q039").
bool requires_version(const AltSvcAdvertisement& adv, int version);

// GET / over HTTP (port 80) or HTTPS (port 443) and parse every Alt-Svc
// header. Throws ConnectFailed, TlsFailed.
AltSvcAdvertisement check_alt_svc(const std::string& name, std::uint16_t port);
// Same with explicit transport settings (tests, pinned addresses).
AltSvcAdvertisement check_alt_svc(const HttpRequest& req);

}  // namespace qr::domain
