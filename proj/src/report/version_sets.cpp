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

#include "report/version_sets.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include "common/error.hpp"
#include "common/text.hpp"

namespace qr::report {

std::string canonical_version_set(const std::vector<std::string>& versions) {
  std::set<std::string> s(versions.begin(), versions.end());
  if (s.empty()) return kNoVersions;
  std::string out;
  for (const auto& v : s) {
    if (!out.empty()) out += ',';
    out += v;
  }
  return out;
}

std::string date_from_path(const std::string& path) {
  static const std::regex re(R"((\d{4}-\d{2}-\d{2}))");
  auto slash = path.find_last_of('/');
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  std::smatch m;
  return std::regex_search(name, m, re) ? m.str(1) : std::string();
}

void VersionSetAggregator::add(const std::string& date, const probe::ProbeRecord& r) {
  if (!r.outcome.quic_capable()) return;
  auto& versions = hosts_[date][r.target.to_string()];
  for (const auto& v : r.outcome.versions) versions.insert(v.to_string());
}

void VersionSetAggregator::add_line(const std::string& date, std::string_view line) {
  if (trim(line).empty()) return;
  try {
    add(date, probe::outcome_from_jsonl(line));
  } catch (const Error& e) {
    if (e.code() != Errc::MalformedRecord) throw;
    ++malformed_;
  }
}

void VersionSetAggregator::add_file(const DatedScan& scan) {
  std::string date = scan.date.empty() ? date_from_path(scan.path) : scan.date;
  if (date.empty()) fail(Errc::ConfigInvalid, "no scan date for " + scan.path);
  std::ifstream in(scan.path);
  if (!in) fail(Errc::IoError, "cannot open " + scan.path);
  hosts_[date];  // a scan with no capable hosts still appears
  std::string line;
  while (std::getline(in, line)) add_line(date, line);
}

VersionSetSeries VersionSetAggregator::finish(std::uint64_t threshold) const {
  VersionSetSeries s;
  s.malformed = malformed_;
  for (const auto& [date, hosts] : hosts_) {
    auto& row = s.counts[date];
    for (const auto& [host, versions] : hosts)
      ++row[canonical_version_set(std::vector<std::string>(versions.begin(), versions.end()))];
    s.capable[date] = hosts.size();
  }
  std::set<std::string> keep;
  for (const auto& [date, row] : s.counts)
    for (const auto& [set, n] : row)
      if (n >= threshold) keep.insert(set);
  for (auto& [date, row] : s.counts) {
    std::map<std::string, std::uint64_t> folded;
    for (const auto& [set, n] : row) folded[keep.count(set) ? set : kOtherSet] += n;
    row = std::move(folded);
  }
  return s;
}

std::string VersionSetSeries::to_csv() const {
  std::ostringstream out;
  out << "date,version_set,hosts\n";
  for (const auto& [date, row] : counts)
    for (const auto& [set, n] : row) out << date << ",\"" << set << "\"," << n << '\n';
  return out.str();
}

VersionSetSeries aggregate_version_sets(const std::vector<DatedScan>& scans, std::uint64_t threshold) {
  VersionSetAggregator agg;
  for (const auto& s : scans) agg.add_file(s);
  return agg.finish(threshold);
}

}  // namespace qr::report
