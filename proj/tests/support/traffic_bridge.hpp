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

// Glue between the oracle world and the analyzer: builds analyzer maps from
// an OracleWorld and flattens a ShareReport into the oracle's tally shape.

#include "support/traffic_oracle.hpp"
#include "traffic/shares.hpp"

namespace qr::test {

struct BuiltMaps {
  traffic::PrefixMap pm;
  traffic::OperatorMap om;
  traffic::LocalNetwork local;
};

inline BuiltMaps build_maps(const OracleWorld& w) {
  BuiltMaps b;
  for (const auto& [c, asn] : w.prefixes) b.pm.add(c, asn);
  std::map<std::string, std::vector<std::uint32_t>> by_op;
  for (const auto& [asn, op] : w.owner) by_op[op].push_back(asn);
  for (const auto& [op, asns] : by_op) b.om.add(op, asns);
  b.local.prefixes = net::CidrSet(w.local);
  return b;
}

inline OracleTally tally_of(const traffic::ShareReport& r) {
  OracleTally t;
  for (const auto& [bin, rows] : r.bins())
    for (std::size_t op = 0; op < rows.size(); ++op)
      for (traffic::Protocol p : traffic::kAllProtocols)
        if (auto v = rows[op][static_cast<int>(p)]) t[{bin, r.operators()[op], traffic::protocol_name(p)}] = v;
  return t;
}

}  // namespace qr::test
