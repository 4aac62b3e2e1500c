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

namespace qr::campaign {

enum class CampaignKind { ProbeIps, ScanDomains, Grab, Traffic, Report, Selftest };
const char* kind_name(CampaignKind k);
std::optional<CampaignKind> parse_kind(std::string_view s);

enum class OutputFormat { Jsonl, Csv };
const char* format_name(OutputFormat f);
std::optional<OutputFormat> parse_format(std::string_view s);

// Report flavours for the `report` kind.
enum class ReportType { Shares, VersionSets, CertClusters, ZoneSummary, Attribution };
const char* report_name(ReportType r);
std::optional<ReportType> parse_report(std::string_view s);

struct DatedInput {
  std::string path;
  std::string date;  // empty: taken from the file name
};

// One JSON document per campaign. Relative paths resolve against the
// directory of the config file; the stored snapshot holds absolute paths.
struct CampaignConfig {
  CampaignKind kind = CampaignKind::Selftest;
  std::string id;  // empty: derived from the snapshot digest
  std::string out;
  OutputFormat format = OutputFormat::Jsonl;
  std::string state_dir;
  std::uint64_t checkpoint_every = 10000;
  double checkpoint_seconds = 30.0;

  // probe-ips, grab: one target per line ("addr[:port]", grab adds "[sni]").
  // scan-domains: one name per line.
  std::string input;
  std::uint16_t port = 443;

  // probe-ips
  double rate = 10000.0;
  double timeout_s = 12.0;
  unsigned retries = 0;
  std::string blocklist;
  bool shuffle = false;
  std::uint64_t seed = 0;
  std::string probe_version;  // empty: engine default
  std::size_t pad_to = 1200;
  std::size_t max_in_flight = 65536;
  std::string bind;  // local IPv4 address for probes

  // grab, scan-domains
  std::string sni;
  std::string version = "Q035";
  unsigned workers = 64;
  std::string resolver = "system";  // or a static resolver file
  std::string anchors;              // PEM bundle; empty: no validation
  std::optional<std::vector<std::string>> bogons;  // replaces the default set
  std::optional<std::uint64_t> zone_size;
  std::string summary_out;

  // traffic, report
  std::vector<DatedInput> inputs;
  std::string prefixes;
  std::string operators;
  std::vector<std::string> local_prefixes;
  std::vector<std::uint32_t> local_asns;
  std::int64_t bin_seconds = 300;
  bool weight_packets = false;
  std::string table_out;

  // report
  ReportType report = ReportType::Shares;
  std::uint64_t set_threshold = 20000;
  std::vector<std::string> grabs;
  std::string rdns;
  std::string rules;

  // Throws ConfigInvalid.
  void validate() const;
  // Canonical JSON with absolute paths; `id` omitted.
  std::string snapshot() const;
};

// Throws ConfigInvalid on unknown keys, wrong types or bad values. With
// `expected`, a "kind" key is optional but must match when present.
CampaignConfig parse_config(std::string_view json_text, const std::string& base_dir,
                            std::optional<CampaignKind> expected = std::nullopt);
CampaignConfig load_config(const std::string& path, std::optional<CampaignKind> expected = std::nullopt);

}  // namespace qr::campaign
