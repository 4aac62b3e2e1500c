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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "handshake/client.hpp"

namespace qr::report {

struct CertCluster {
  std::string fingerprint;
  std::string common_name;  // leaf CN of the first host seen with it
  std::uint64_t hosts = 0;
  std::uint64_t cumulative_hosts = 0;
};

struct CertClusterReport {
  std::vector<CertCluster> clusters;  // descending by hosts, ties by fingerprint
  std::uint64_t hosts_with_certs = 0;
  std::uint64_t hosts_without_certs = 0;
  std::uint64_t malformed = 0;

  // Percent of certificate-presenting hosts covered by the n largest clusters.
  double coverage_percent(std::size_t n) const;
  // rank,fingerprint,common_name,hosts,cumulative_percent
  std::string to_csv() const;
};

// Hosts are keyed by their leaf certificate fingerprint.
class CertClusterer {
 public:
  void add(const handshake::GrabRecord& r);
  void add(std::string_view fingerprint, std::string_view common_name);
  void add_line(std::string_view jsonl);  // malformed lines counted
  void add_without_cert() { ++without_; }
  CertClusterReport finish() const;

 private:
  struct Entry {
    std::string common_name;
    std::uint64_t hosts = 0;
  };
  std::unordered_map<std::string, Entry> by_fp_;
  std::uint64_t without_ = 0;
  std::uint64_t malformed_ = 0;
};

CertClusterReport cluster_certificates(const std::vector<std::string>& jsonl_paths);

}  // namespace qr::report
