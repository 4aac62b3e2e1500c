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

#include "report/cert_clusters.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "common/error.hpp"
#include "common/text.hpp"

namespace qr::report {

double CertClusterReport::coverage_percent(std::size_t n) const {
  if (hosts_with_certs == 0) return 0.0;
  if (n == 0) return 0.0;
  n = std::min(n, clusters.size());
  return 100.0 * static_cast<double>(clusters[n - 1].cumulative_hosts) / static_cast<double>(hosts_with_certs);
}

std::string CertClusterReport::to_csv() const {
  std::ostringstream out;
  out << "rank,fingerprint,common_name,hosts,cumulative_percent\n";
  char pct[32];
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    std::snprintf(pct, sizeof pct, "%.2f", coverage_percent(i + 1));
    std::string cn = clusters[i].common_name;
    std::replace(cn.begin(), cn.end(), '"', '\'');
    out << i + 1 << ',' << clusters[i].fingerprint << ",\"" << cn << "\"," << clusters[i].hosts << ',' << pct << '\n';
  }
  return out.str();
}

void CertClusterer::add(std::string_view fingerprint, std::string_view common_name) {
  auto [it, fresh] = by_fp_.try_emplace(std::string(fingerprint));
  if (fresh) it->second.common_name = std::string(common_name);
  ++it->second.hosts;
}

void CertClusterer::add(const handshake::GrabRecord& r) {
  if (r.cert_fingerprints.empty()) {
    ++without_;
    return;
  }
  add(r.cert_fingerprints.front(), r.leaf_cn);
}

void CertClusterer::add_line(std::string_view jsonl) {
  if (trim(jsonl).empty()) return;
  try {
    add(handshake::grab_record_from_jsonl(jsonl));
  } catch (const Error& e) {
    if (e.code() != Errc::MalformedRecord) throw;
    ++malformed_;
  }
}

CertClusterReport CertClusterer::finish() const {
  CertClusterReport r;
  r.hosts_without_certs = without_;
  r.malformed = malformed_;
  r.clusters.reserve(by_fp_.size());
  for (const auto& [fp, e] : by_fp_) r.clusters.push_back({fp, e.common_name, e.hosts, 0});
  std::sort(r.clusters.begin(), r.clusters.end(), [](const CertCluster& a, const CertCluster& b) {
    return a.hosts != b.hosts ? a.hosts > b.hosts : a.fingerprint < b.fingerprint;
  });
  std::uint64_t run = 0;
  for (auto& c : r.clusters) c.cumulative_hosts = run += c.hosts;
  r.hosts_with_certs = run;
  return r;
}

CertClusterReport cluster_certificates(const std::vector<std::string>& jsonl_paths) {
  CertClusterer c;
  for (const auto& path : jsonl_paths) {
    std::ifstream in(path);
    if (!in) fail(Errc::IoError, "cannot open " + path);
    std::string line;
    while (std::getline(in, line)) c.add_line(line);
  }
  return c.finish();
}

}  // namespace qr::report
