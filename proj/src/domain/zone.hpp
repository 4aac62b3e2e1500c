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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "domain/scanner.hpp"

namespace qr::domain {

// 100 * count / total in hundredths of a percent, rounded half to even.
// 0 when total is 0.
std::int64_t percent_hundredths(std::uint64_t count, std::uint64_t total);
std::string format_hundredths(std::int64_t h);  // 8861 -> "88.61"

struct ZoneSummary {
  std::uint64_t total = 0;
  std::array<std::uint64_t, 6> counts{};  // indexed by Category
  std::uint64_t cert_valid = 0;
  // Domains in the declared zone size that no verdict accounts for; always 0
  // without a declared size.
  std::uint64_t unaccounted = 0;

  std::uint64_t count(Category c) const { return counts[static_cast<std::size_t>(c)]; }
  std::int64_t percent(Category c) const { return percent_hundredths(count(c), total); }
  std::int64_t cert_valid_percent() const { return percent_hundredths(cert_valid, total); }
};

// Commutative accumulator; merge() of partial tallies equals one tally.
class ZoneTally {
 public:
  void add(Category c, bool cert_valid, std::uint64_t n = 1);
  void add(const ScanVerdict& v) { add(v.category, v.cert_valid); }
  void merge(const ZoneTally& other);
  // Throws InvalidArgument if cert_valid is counted outside QuicEnabled or the
  // declared size is smaller than the tallied count.
  ZoneSummary summarize(std::optional<std::uint64_t> declared_total = std::nullopt) const;

 private:
  std::array<std::uint64_t, 6> counts_{};
  std::uint64_t cert_valid_ = 0;
};

ZoneSummary summarize_zone(const std::vector<ScanVerdict>& verdicts,
                           std::optional<std::uint64_t> declared_total = std::nullopt);

// category,count,percentage rows (quic_enabled, valid_certificate, timeout, ...); an "unaccounted" row only
// when non-zero.
std::string zone_summary_csv(const ZoneSummary& s);

}  // namespace qr::domain
