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

#include "domain/zone.hpp"

#include <cstdio>

#include "common/error.hpp"

namespace qr::domain {

std::int64_t percent_hundredths(std::uint64_t count, std::uint64_t total) {
  if (total == 0) return 0;
  unsigned __int128 num = static_cast<unsigned __int128>(count) * 10000u;
  auto q = num / total;
  auto r = num % total;
  if (2 * r > total || (2 * r == total && (q & 1))) ++q;
  return static_cast<std::int64_t>(q);
}

std::string format_hundredths(std::int64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%lld.%02lld", h < 0 ? "-" : "", static_cast<long long>(std::llabs(h) / 100),
                static_cast<long long>(std::llabs(h) % 100));
  return buf;
}

void ZoneTally::add(Category c, bool cert_valid, std::uint64_t n) {
  counts_[static_cast<std::size_t>(c)] += n;
  if (cert_valid) {
    if (c != Category::QuicEnabled) fail(Errc::InvalidArgument, "valid certificate outside quic_enabled");
    cert_valid_ += n;
  }
}

void ZoneTally::merge(const ZoneTally& other) {
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  cert_valid_ += other.cert_valid_;
}

ZoneSummary ZoneTally::summarize(std::optional<std::uint64_t> declared_total) const {
  ZoneSummary s;
  s.counts = counts_;
  s.cert_valid = cert_valid_;
  std::uint64_t sum = 0;
  for (auto c : counts_) sum += c;
  if (cert_valid_ > s.count(Category::QuicEnabled)) fail(Errc::InvalidArgument, "more valid certificates than quic");
  if (declared_total) {
    if (*declared_total < sum) fail(Errc::InvalidArgument, "declared zone size below tallied domains");
    s.total = *declared_total;
    s.unaccounted = *declared_total - sum;
  } else {
    s.total = sum;
  }
  return s;
}

ZoneSummary summarize_zone(const std::vector<ScanVerdict>& verdicts, std::optional<std::uint64_t> declared_total) {
  ZoneTally t;
  for (const auto& v : verdicts) t.add(v);
  return t.summarize(declared_total);
}

std::string zone_summary_csv(const ZoneSummary& s) {
  std::string out = "category,count,percentage\n";
  auto row = [&](const std::string& label, std::uint64_t n) {
    out += label + "," + std::to_string(n) + "," + format_hundredths(percent_hundredths(n, s.total)) + "\n";
  };
  out += "domains," + std::to_string(s.total) + "," + (s.total ? "100.00" : "0.00") + "\n";
  row("quic_enabled", s.count(Category::QuicEnabled));
  row("valid_certificate", s.cert_valid);
  for (auto c : {Category::Timeout, Category::VersionFailed, Category::ProtocolError, Category::InvalidIP,
                 Category::DnsFailure})
    row(category_name(c), s.count(c));
  if (s.unaccounted) row("unaccounted", s.unaccounted);
  return out;
}

}  // namespace qr::domain
