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

#include <atomic>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "campaign/config.hpp"

namespace qr::campaign {

struct CampaignOptions {
  std::string resume_id;
  std::optional<double> rate;
  std::optional<double> timeout_s;
  std::optional<std::string> out;
  std::optional<OutputFormat> format;
  // Test hook: after this many committed records the run stops as if
  // killed, without a final checkpoint (throws Interrupted). 0 disables.
  std::uint64_t abort_after = 0;
  std::ostream* log = nullptr;
  // Polled between records; a set flag checkpoints and returns early.
  const std::atomic<bool>* stop = nullptr;
};

struct CampaignResult {
  int exit_status = 0;  // 0 done, 130 stopped
  std::string id;
  std::string state_path;
  bool resumed = false;
  bool interrupted = false;
  std::uint64_t records = 0;  // records written by this run
  std::uint64_t cursor = 0;   // input records completed overall
  std::vector<std::string> artifacts;
  std::string summary;
};

// `cfg` may be omitted when resuming: the checkpoint's config snapshot is
// authoritative either way. Throws ConfigInvalid, ResumeDigestMismatch,
// IoError, Interrupted (abort hook only).
CampaignResult run_campaign(const std::optional<CampaignConfig>& cfg, const CampaignOptions& opts);

// Campaign id for a config: "<kind>-" + 12 hex digits of the snapshot digest.
std::string derive_campaign_id(const CampaignConfig& cfg);

// Mock-responder self check: probe matrix, handshake extraction, codec
// round trips. One "PASS|FAIL <name> <detail>" line per check on `log`.
// Returns the number of failed checks.
int run_selftest(std::ostream& log, unsigned trials_per_cell = 25);

}  // namespace qr::campaign
