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

#include "traffic/shares.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "common/error.hpp"
#include "common/time_util.hpp"

namespace qr::traffic {

namespace {

struct Endpoint {
  bool local = false;
  std::optional<std::uint32_t> asn;
};

Endpoint resolve(const std::optional<net::IpAddress>& addr, const std::optional<std::uint32_t>& asn,
                 const PrefixMap& pm, const LocalNetwork& local) {
  Endpoint e;
  if (asn) {
    e.asn = asn;
    e.local = local.asns.count(*asn) != 0;
  } else if (addr) {
    e.local = local.prefixes.contains(*addr);
    e.asn = pm.lookup(*addr);
    if (e.asn && local.asns.count(*e.asn)) e.local = true;
  }
  return e;
}

std::string percent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", ratio * 100.0);
  return buf;
}

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

const std::string& attribute(const FlowRecord& f, const PrefixMap& pm, const OperatorMap& om,
                             const LocalNetwork& local) {
  Endpoint src = resolve(f.src_addr, f.src_asn, pm, local);
  Endpoint dst = resolve(f.dst_addr, f.dst_asn, pm, local);
  const Endpoint* order[2] = {nullptr, nullptr};
  if (src.local && !dst.local) {
    order[0] = &dst;
  } else if (dst.local && !src.local) {
    order[0] = &src;
  } else if (!src.local && !dst.local) {
    order[0] = &src;
    order[1] = &dst;
  }
  for (const Endpoint* e : order)
    if (e && e->asn && om.known(*e->asn)) return om.operator_of(*e->asn);
  return kOtherOperator;
}

const std::string& attribute(const FlowRecord& f, const PrefixMap& pm, const OperatorMap& om,
                             const net::CidrSet& local_prefixes) {
  return attribute(f, pm, om, LocalNetwork{local_prefixes, {}});
}

ShareReport::ShareReport(std::vector<std::string> operators, std::int64_t bin_us)
    : operators_(std::move(operators)), bin_us_(bin_us) {
  if (bin_us_ <= 0) fail(Errc::InvalidArgument, "bin width must be positive");
  operators_.erase(std::remove(operators_.begin(), operators_.end(), kOtherOperator), operators_.end());
  operators_.push_back(kOtherOperator);
  totals_.assign(operators_.size(), ProtocolCells{});
}

std::int64_t ShareReport::bin_of(std::int64_t start_us) const {
  std::int64_t q = start_us / bin_us_;
  if (start_us % bin_us_ != 0 && start_us < 0) --q;
  return q;
}

std::size_t ShareReport::operator_index(const std::string& name) const {
  for (std::size_t i = 0; i < operators_.size(); ++i)
    if (operators_[i] == name) return i;
  return operators_.size() - 1;
}

void ShareReport::add(std::int64_t bin, std::size_t op, Protocol p, std::uint64_t amount) {
  auto& row = bins_[bin];
  if (row.empty()) row.assign(operators_.size(), ProtocolCells{});
  row[op][static_cast<int>(p)] += amount;
  totals_[op][static_cast<int>(p)] += amount;
}

void ShareReport::merge(const ShareReport& other) {
  if (other.operators_ != operators_ || other.bin_us_ != bin_us_)
    fail(Errc::InvalidArgument, "cannot merge reports with different operators or bin width");
  for (const auto& [bin, rows] : other.bins_)
    for (std::size_t op = 0; op < rows.size(); ++op)
      for (Protocol p : kAllProtocols)
        if (auto v = rows[op][static_cast<int>(p)]) add(bin, op, p, v);
}

std::uint64_t ShareReport::cell(std::size_t op, Protocol p) const { return totals_.at(op)[static_cast<int>(p)]; }

std::uint64_t ShareReport::protocol_total(Protocol p) const {
  std::uint64_t s = 0;
  for (const auto& row : totals_) s += row[static_cast<int>(p)];
  return s;
}

std::uint64_t ShareReport::operator_web_total(std::size_t op) const {
  std::uint64_t s = 0;
  for (Protocol p : kWebProtocols) s += cell(op, p);
  return s;
}

std::uint64_t ShareReport::total() const {
  std::uint64_t s = 0;
  for (Protocol p : kAllProtocols) s += protocol_total(p);
  return s;
}

double ShareReport::overall_share(Protocol p) const { return ratio(protocol_total(p), total()); }

double ShareReport::operator_share(const std::string& op, Protocol p) const {
  if (p == Protocol::Other) return 0.0;
  auto i = operator_index(op);
  return ratio(cell(i, p), operator_web_total(i));
}

double ShareReport::share_in_protocol(Protocol p, const std::string& op) const {
  return ratio(cell(operator_index(op), p), protocol_total(p));
}

ShareAccumulator::ShareAccumulator(const PrefixMap& pm, const OperatorMap& om, LocalNetwork local, ShareOptions opts)
    : pm_(pm), om_(om), local_(std::move(local)), opts_(opts), report_(om.names(), opts.bin_us) {}

void ShareAccumulator::add(const FlowRecord& f) {
  std::uint64_t amount = (opts_.weight == Weight::Bytes ? f.bytes : f.packets) * f.sampling;
  report_.add(report_.bin_of(f.start_us), report_.operator_index(attribute(f, pm_, om_, local_)), classify_flow(f),
              amount);
}

ShareReport compute_shares(const std::vector<FlowRecord>& flows, const PrefixMap& pm, const OperatorMap& om,
                           const LocalNetwork& local, ShareOptions opts) {
  ShareAccumulator acc(pm, om, local, opts);
  for (const auto& f : flows) acc.add(f);
  return acc.take();
}

void emit_timeseries(const ShareReport& r, std::ostream& out) {
  out << "bin_start,protocol,operator,bytes,overall_share\n";
  char share[32];
  for (const auto& [bin, rows] : r.bins()) {
    std::string start = iso8601_utc(from_unix_micros(bin * r.bin_us()));
    std::uint64_t bin_total = 0;
    for (const auto& row : rows)
      for (auto v : row) bin_total += v;
    for (Protocol p : kAllProtocols) {
      std::uint64_t proto_total = 0;
      for (const auto& row : rows) proto_total += row[static_cast<int>(p)];
      std::snprintf(share, sizeof share, "%.6f", ratio(proto_total, bin_total));
      for (std::size_t op = 0; op < rows.size(); ++op)
        out << start << ',' << protocol_name(p) << ',' << r.operators()[op] << ',' << rows[op][static_cast<int>(p)]
            << ',' << share << '\n';
    }
  }
}

std::string timeseries_csv(const ShareReport& r) {
  std::ostringstream s;
  emit_timeseries(r, s);
  return s.str();
}

std::string share_table_csv(const ShareReport& r) {
  std::ostringstream s;
  s << "metric,operator,HTTP,HTTPS,QUIC\n";
  s << "overall,all";
  for (Protocol p : kWebProtocols) s << ',' << percent(r.overall_share(p));
  s << '\n';
  for (const auto& op : r.operators()) {
    s << "operator_share," << op;
    for (Protocol p : kWebProtocols) s << ',' << percent(r.operator_share(op, p));
    s << '\n';
  }
  for (const auto& op : r.operators()) {
    s << "share_in_protocol," << op;
    for (Protocol p : kWebProtocols) s << ',' << percent(r.share_in_protocol(p, op));
    s << '\n';
  }
  return s.str();
}

}  // namespace qr::traffic
