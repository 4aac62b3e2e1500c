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

namespace qr::campaign {

// Checkpoint of a line-oriented campaign. `cursor` input records are fully
// reflected in the first `output_offset` bytes of the output file.
struct CampaignState {
  std::string id;
  std::string kind;
  std::string input_digest;  // hex SHA-256 of the input
  std::uint64_t cursor = 0;
  std::uint64_t output_offset = 0;
  std::string output_path;
  std::string config_snapshot;
  bool complete = false;
  std::string updated;  // ISO-8601 UTC

  // Write-temp-then-rename. Throws IoError.
  void save(const std::string& path) const;
  // nullopt when the file does not exist; ConfigInvalid when unreadable.
  static std::optional<CampaignState> load(const std::string& path);
};

std::string state_path(const std::string& state_dir, const std::string& id);
// QUIC_RECON_STATE_DIR, else ".quic-recon".
std::string default_state_dir();

}  // namespace qr::campaign
