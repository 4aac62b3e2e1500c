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
#include <istream>
#include <string>

#include "common/bytes.hpp"
#include "traffic/flow.hpp"

namespace qr::traffic {

struct PcapStats {
  std::uint64_t packets = 0;   // records in the file
  std::uint64_t flows = 0;     // delivered to the sink
  std::uint64_t skipped = 0;   // non-IP or truncated headers
};

// Classic libpcap files (micro- or nanosecond, either byte order) with
// Ethernet, raw IP, Linux SLL or BSD loopback link types. Each packet becomes
// one FlowRecord with packets = 1 and bytes = the original wire length,
// capped at kMaxWireLength. Nothing past the transport ports is read, so
// header-only (snaplen-truncated) captures work.
inline constexpr std::uint32_t kMaxWireLength = 262144;

PcapStats read_pcap(std::istream& in, const std::function<void(const FlowRecord&)>& sink);
PcapStats read_pcap(ByteView file, const std::function<void(const FlowRecord&)>& sink);
PcapStats read_pcap_file(const std::string& path, const std::function<void(const FlowRecord&)>& sink);

}  // namespace qr::traffic
