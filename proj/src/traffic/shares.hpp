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
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "net/address.hpp"
#include "traffic/flow.hpp"
#include "traffic/prefix_map.hpp"

namespace qr::traffic {

// The vantage point's own network, by prefix or (for pre-mapped traces) ASN.
struct LocalNetwork {
  net::CidrSet prefixes;
  std::set<std::uint32_t> asns;
};

// Operator owning the non-local endpoint. With both endpoints non-local the
// source is tried first, then the destination. Both local, or no endpoint
// mapping to a named operator, gives kOtherOperator.
const std::string& attribute(const FlowRecord& f, const PrefixMap& pm, const OperatorMap& om, const LocalNetwork& local);
const std::string& attribute(const FlowRecord& f, const PrefixMap& pm, const OperatorMap& om,
                             const net::CidrSet& local_prefixes);

enum class Weight { Bytes, Packets };

inline constexpr std::int64_t kDefaultBinMicros = 300'000'000;  // 5 minutes

struct ShareOptions {
  std::int64_t bin_us = kDefaultBinMicros;
  Weight weight = Weight::Bytes;
};

// Totals for one operator, indexed by Protocol.
using ProtocolCells = std::array<std::uint64_t, 4>;

class ShareReport {
 public:
  // `operators` are the named operators; "other" is appended as the last row.
  explicit ShareReport(std::vector<std::string> operators, std::int64_t bin_us = kDefaultBinMicros);

  void add(std::int64_t bin, std::size_t op, Protocol p, std::uint64_t amount);
  // Cell-wise sum. Operators and bin width must match.
  void merge(const ShareReport& other);

  std::int64_t bin_us() const { return bin_us_; }
  std::int64_t bin_of(std::int64_t start_us) const;
  const std::vector<std::string>& operators() const { return operators_; }
  std::size_t operator_index(const std::string& name) const;  // "other" row if unknown
  const std::map<std::int64_t, std::vector<ProtocolCells>>& bins() const { return bins_; }
  bool empty() const { return bins_.empty(); }

  std::uint64_t cell(std::size_t op, Protocol p) const;
  std::uint64_t protocol_total(Protocol p) const;
  std::uint64_t operator_web_total(std::size_t op) const;
  std::uint64_t total() const;

  // Ratios in [0, 1]; 0 when the denominator is empty.
  double overall_share(Protocol p) const;
  double operator_share(const std::string& op, Protocol p) const;  // p in web protocols
  double share_in_protocol(Protocol p, const std::string& op) const;

  bool operator==(const ShareReport& o) const {
    return bin_us_ == o.bin_us_ && operators_ == o.operators_ && bins_ == o.bins_;
  }

 private:
  std::vector<std::string> operators_;
  std::int64_t bin_us_;
  std::map<std::int64_t, std::vector<ProtocolCells>> bins_;
  std::vector<ProtocolCells> totals_;
};

// Streaming fold; feed flows in any order and in any partition, then merge.
class ShareAccumulator {
 public:
  ShareAccumulator(const PrefixMap& pm, const OperatorMap& om, LocalNetwork local, ShareOptions opts = {});
  void add(const FlowRecord& f);
  const ShareReport& report() const { return report_; }
  ShareReport take() { return std::move(report_); }

 private:
  const PrefixMap& pm_;
  const OperatorMap& om_;
  LocalNetwork local_;
  ShareOptions opts_;
  ShareReport report_;
};

ShareReport compute_shares(const std::vector<FlowRecord>& flows, const PrefixMap& pm, const OperatorMap& om,
                           const LocalNetwork& local, ShareOptions opts = {});

// bin_start,protocol,operator,bytes,overall_share. One row per bin x protocol
// x operator (named, then "other"); overall_share is the protocol's share of
// that bin's traffic.
void emit_timeseries(const ShareReport& r, std::ostream& out);
std::string timeseries_csv(const ShareReport& r);

// Share summary in percent:
// metric,operator,HTTP,HTTPS,QUIC with rows overall/all, then
// operator_share/<op> and share_in_protocol/<op> for every operator.
std::string share_table_csv(const ShareReport& r);

}  // namespace qr::traffic
