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

#include "campaign/state.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>

#include "common/error.hpp"
#include "common/text.hpp"
#include "common/time_util.hpp"
#include "json.hpp"

namespace qr::campaign {

void CampaignState::save(const std::string& path) const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["kind"] = kind;
  j["input_digest"] = input_digest;
  j["cursor"] = cursor;
  j["output_offset"] = output_offset;
  j["output_path"] = output_path;
  j["config"] = nlohmann::ordered_json::parse(config_snapshot);
  j["complete"] = complete;
  j["updated"] = iso8601_utc(std::chrono::system_clock::now());
  std::error_code ec;
  std::filesystem::create_directories(std::filesystem::path(path).parent_path(), ec);
  write_file_atomic(path, j.dump(2) + "\n");
}

std::optional<CampaignState> CampaignState::load(const std::string& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    auto j = nlohmann::ordered_json::parse(read_file(path));
    CampaignState s;
    s.id = j.at("id").get<std::string>();
    s.kind = j.at("kind").get<std::string>();
    s.input_digest = j.at("input_digest").get<std::string>();
    s.cursor = j.at("cursor").get<std::uint64_t>();
    s.output_offset = j.at("output_offset").get<std::uint64_t>();
    s.output_path = j.at("output_path").get<std::string>();
    s.config_snapshot = j.at("config").dump();
    s.complete = j.at("complete").get<bool>();
    s.updated = j.value("updated", "");
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ConfigInvalid, "corrupt checkpoint " + path + ": " + e.what());
  }
}

std::string state_path(const std::string& state_dir, const std::string& id) {
  return (std::filesystem::path(state_dir) / (id + ".json")).string();
}

std::string default_state_dir() {
  const char* env = std::getenv("QUIC_RECON_STATE_DIR");
  return env && *env ? env : ".quic-recon";
}

}  // namespace qr::campaign
