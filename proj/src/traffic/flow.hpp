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
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "net/address.hpp"

namespace qr::traffic {

enum class Transport { Tcp, Udp, Other };
enum class Protocol { HTTP = 0, HTTPS = 1, QUIC = 2, Other = 3 };

inline constexpr Protocol kAllProtocols[] = {Protocol::HTTP, Protocol::HTTPS, Protocol::QUIC, Protocol::Other};
inline constexpr Protocol kWebProtocols[] = {Protocol::HTTP, Protocol::HTTPS, Protocol::QUIC};

const char* protocol_name(Protocol p);

struct FlowRecord {
  std::int64_t start_us = 0;  // unix microseconds
  // Either an address or a pre-mapped ASN per endpoint (anonymised traces).
  std::optional<net::IpAddress> src_addr, dst_addr;
  std::optional<std::uint32_t> src_asn, dst_asn;
  Transport transport = Transport::Other;
  std::uint16_t src_port = 0, dst_port = 0;
  std::uint64_t bytes = 0;
  std::uint64_t packets = 0;
  // Sampled flow data: each record stands for `sampling` records.
  std::uint32_t sampling = 1;
};

// TCP 443 -> HTTPS, else TCP 80 -> HTTP, UDP 443 -> QUIC, anything else Other;
// either port may match.
Protocol classify_flow(const FlowRecord& f);

// One CSV record, header `ts,src,dst,proto,sport,dport,bytes,packets[,sampling]`.
// ts: ISO-8601 or unix seconds (fractional allowed). src/dst: address, or
// ASN as "AS15169". proto: tcp|udp|<name>|<number>. Throws MalformedRecord.
FlowRecord parse_flow_csv_line(std::string_view line);

// Streams a flow CSV file (header required). Malformed lines are counted,
// not fatal. Returns the number of records delivered.
struct FlowReadStats {
  std::uint64_t records = 0;
  std::uint64_t malformed = 0;
};
FlowReadStats read_flow_csv(const std::string& path, const std::function<void(const FlowRecord&)>& sink);

}  // namespace qr::traffic
