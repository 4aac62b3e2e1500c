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
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "probe/engine.hpp"

namespace qr::report {

inline constexpr std::uint64_t kDefaultSetThreshold = 20000;
inline const std::string kOtherSet = "other";
inline const std::string kNoVersions = "none";  // capable via public reset only

// Sorted, deduplicated, comma-joined; "none" for an empty list.
std::string canonical_version_set(const std::vector<std::string>& versions);

struct DatedScan {
  std::string date;  // YYYY-MM-DD
  std::string path;
};

// First YYYY-MM-DD found in the file name, or empty.
std::string date_from_path(const std::string& path);

struct VersionSetSeries {
  // date -> version set -> capable hosts
  std::map<std::string, std::map<std::string, std::uint64_t>> counts;
  std::map<std::string, std::uint64_t> capable;
  std::uint64_t malformed = 0;

  // date,version_set,hosts
  std::string to_csv() const;
  bool operator==(const VersionSetSeries&) const = default;
};

class VersionSetAggregator {
 public:
  void add(const std::string& date, const probe::ProbeRecord& r);
  // One JSONL line; malformed lines are counted, not thrown.
  void add_line(const std::string& date, std::string_view line);
  void add_file(const DatedScan& scan);

  // Sets that never reach `threshold` hosts on any date fold into "other".
  // A threshold of 0 or 1 keeps everything.
  VersionSetSeries finish(std::uint64_t threshold = kDefaultSetThreshold) const;

 private:
  // date -> host -> union of advertised versions
  std::map<std::string, std::map<std::string, std::set<std::string>>> hosts_;
  std::uint64_t malformed_ = 0;
};

VersionSetSeries aggregate_version_sets(const std::vector<DatedScan>& scans,
                                        std::uint64_t threshold = kDefaultSetThreshold);

}  // namespace qr::report
