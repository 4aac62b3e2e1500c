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
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "net/address.hpp"

namespace qr::probe {

using ProbeTarget = net::Endpoint;

// "192.0.2.1", "192.0.2.1:8443", "2001:db8::1", "[2001:db8::1]:8443".
// Throws ParseError on a bad address or a port outside [1, 65535].
ProbeTarget parse_target(std::string_view text, std::uint16_t default_port = 443);

// Pull-style target stream; nullopt marks the end.
using TargetSource = std::function<std::optional<ProbeTarget>()>;

TargetSource vector_source(std::vector<ProbeTarget> targets);

// Streams a target list file line by line ('#' comments, blank lines
// skipped). Memory use does not depend on file length.
class TargetFile {
 public:
  explicit TargetFile(const std::string& path, std::uint16_t default_port = 443);

  // Next target together with its zero-based record index.
  std::optional<std::pair<std::uint64_t, ProbeTarget>> next();
  TargetSource source();

 private:
  std::ifstream in_;
  std::string path_;
  std::uint16_t default_port_;
  std::uint64_t index_ = 0;
  std::uint64_t line_no_ = 0;
};

}  // namespace qr::probe
