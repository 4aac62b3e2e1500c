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

#include "traffic/flow.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "common/error.hpp"
#include "common/text.hpp"
#include "common/time_util.hpp"

namespace qr::traffic {

const char* protocol_name(Protocol p) {
  switch (p) {
    case Protocol::HTTP: return "HTTP";
    case Protocol::HTTPS: return "HTTPS";
    case Protocol::QUIC: return "QUIC";
    case Protocol::Other: return "Other";
  }
  return "Other";
}

Protocol classify_flow(const FlowRecord& f) {
  auto either = [&](std::uint16_t p) { return f.src_port == p || f.dst_port == p; };
  if (f.transport == Transport::Tcp) {
    if (either(443)) return Protocol::HTTPS;
    if (either(80)) return Protocol::HTTP;
  } else if (f.transport == Transport::Udp) {
    if (either(443)) return Protocol::QUIC;
  }
  return Protocol::Other;
}

namespace {

template <typename T>
T number(std::string_view s, const char* field) {
  T v{};
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    fail(Errc::MalformedRecord, std::string("bad ") + field + " '" + std::string(s) + "'");
  return v;
}

std::int64_t parse_ts(std::string_view s) {
  if (s.find('-') != std::string_view::npos) {
    try {
      return to_unix_micros(parse_iso8601_utc(s));
    } catch (const Error& e) {
      fail(Errc::MalformedRecord, e.what());
    }
  }
  auto dot = s.find('.');
  std::int64_t secs = number<std::int64_t>(s.substr(0, dot), "ts");
  std::int64_t micros = 0;
  if (dot != std::string_view::npos) {
    auto frac = s.substr(dot + 1);
    if (frac.empty() || frac.size() > 9) fail(Errc::MalformedRecord, "bad ts fraction");
    std::string padded(frac);
    padded.resize(6, '0');
    micros = number<std::int64_t>(std::string_view(padded).substr(0, 6), "ts");
  }
  return secs * 1'000'000 + micros;
}

void parse_endpoint(std::string_view s, std::optional<net::IpAddress>& addr, std::optional<std::uint32_t>& asn) {
  if (s.size() > 2 && (s[0] == 'A' || s[0] == 'a') && (s[1] == 'S' || s[1] == 's')) {
    asn = number<std::uint32_t>(s.substr(2), "asn");
    return;
  }
  addr = net::IpAddress::parse(s);
  if (!addr) fail(Errc::MalformedRecord, "bad address '" + std::string(s) + "'");
}

Transport parse_transport(std::string_view s) {
  auto l = to_lower(s);
  if (l == "tcp" || l == "6") return Transport::Tcp;
  if (l == "udp" || l == "17") return Transport::Udp;
  if (l.empty()) fail(Errc::MalformedRecord, "empty proto");
  return Transport::Other;
}

}  // namespace

FlowRecord parse_flow_csv_line(std::string_view line) {
  auto fields = split(trim(line), ',');
  if (fields.size() != 8 && fields.size() != 9)
    fail(Errc::MalformedRecord, "expected 8 or 9 fields, got " + std::to_string(fields.size()));
  for (auto& f : fields) f = std::string(trim(f));
  FlowRecord r;
  r.start_us = parse_ts(fields[0]);
  parse_endpoint(fields[1], r.src_addr, r.src_asn);
  parse_endpoint(fields[2], r.dst_addr, r.dst_asn);
  r.transport = parse_transport(fields[3]);
  r.src_port = number<std::uint16_t>(fields[4], "sport");
  r.dst_port = number<std::uint16_t>(fields[5], "dport");
  r.bytes = number<std::uint64_t>(fields[6], "bytes");
  r.packets = number<std::uint64_t>(fields[7], "packets");
  if (fields.size() == 9) {
    r.sampling = number<std::uint32_t>(fields[8], "sampling");
    if (r.sampling == 0) fail(Errc::MalformedRecord, "sampling must be >= 1");
  }
  if (r.transport != Transport::Other && (r.packets < 1 || r.bytes < r.packets))
    fail(Errc::MalformedRecord, "need bytes >= packets >= 1");
  return r;
}

FlowReadStats read_flow_csv(const std::string& path, const std::function<void(const FlowRecord&)>& sink) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot open " + path);
  FlowReadStats stats;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (header) {
      header = false;
      if (t.starts_with("ts,")) continue;
    }
    try {
      sink(parse_flow_csv_line(t));
      ++stats.records;
    } catch (const Error& e) {
      if (e.code() != Errc::MalformedRecord) throw;
      ++stats.malformed;
    }
  }
  return stats;
}

}  // namespace qr::traffic
