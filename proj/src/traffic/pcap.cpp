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

#include "traffic/pcap.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "common/error.hpp"

namespace qr::traffic {

namespace {

constexpr std::uint32_t kMagicMicros = 0xa1b2c3d4;
constexpr std::uint32_t kMagicNanos = 0xa1b23c4d;

enum LinkType : std::uint32_t { kNull = 0, kEthernet = 1, kRaw = 101, kLinuxSll = 113, kRawAlt = 12 };

std::uint16_t be16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] << 8 | p[1]); }

struct Decoder {
  bool swap = false;
  std::uint32_t u32(const std::uint8_t* p) const {
    std::uint32_t v = p[0] | p[1] << 8 | p[2] << 16 | static_cast<std::uint32_t>(p[3]) << 24;
    return swap ? __builtin_bswap32(v) : v;
  }
};

// Returns the IP header offset inside the captured bytes, or -1.
long ip_offset(std::uint32_t link, const std::uint8_t* p, std::size_t n) {
  switch (link) {
    case kEthernet: {
      std::size_t off = 12;
      if (n < off + 2) return -1;
      std::uint16_t type = be16(p + off);
      while (type == 0x8100 || type == 0x88a8) {  // VLAN tags
        off += 4;
        if (n < off + 2) return -1;
        type = be16(p + off);
      }
      if (type != 0x0800 && type != 0x86dd) return -1;
      return static_cast<long>(off + 2);
    }
    case kLinuxSll:
      if (n < 16) return -1;
      return (be16(p + 14) == 0x0800 || be16(p + 14) == 0x86dd) ? 16 : -1;
    case kNull:
      return n >= 4 ? 4 : -1;
    case kRaw:
    case kRawAlt:
      return 0;
    default:
      return -1;
  }
}

bool decode_ip(const std::uint8_t* p, std::size_t n, FlowRecord& r) {
  if (n < 1) return false;
  int version = p[0] >> 4;
  std::uint8_t proto = 0;
  std::size_t l4 = 0;
  bool first_fragment = true;
  if (version == 4) {
    if (n < 20) return false;
    std::size_t ihl = (p[0] & 0x0f) * 4u;
    if (ihl < 20) return false;
    r.src_addr = net::IpAddress::v4(std::array<std::uint8_t, 4>{p[12], p[13], p[14], p[15]});
    r.dst_addr = net::IpAddress::v4(std::array<std::uint8_t, 4>{p[16], p[17], p[18], p[19]});
    proto = p[9];
    first_fragment = (be16(p + 6) & 0x1fff) == 0;
    l4 = ihl;
  } else if (version == 6) {
    if (n < 40) return false;
    std::array<std::uint8_t, 16> a{}, b{};
    std::copy(p + 8, p + 24, a.begin());
    std::copy(p + 24, p + 40, b.begin());
    r.src_addr = net::IpAddress::v6(a);
    r.dst_addr = net::IpAddress::v6(b);
    proto = p[6];
    l4 = 40;
    for (int hops = 0; hops < 8; ++hops) {
      if (proto == 0 || proto == 43 || proto == 60) {
        if (n < l4 + 2) return true;  // addresses known, ports not
        proto = p[l4];
        l4 += (p[l4 + 1] + 1u) * 8u;
      } else if (proto == 44) {
        if (n < l4 + 8) return true;
        first_fragment = (be16(p + l4 + 2) & 0xfff8) == 0;
        proto = p[l4];
        l4 += 8;
      } else {
        break;
      }
    }
  } else {
    return false;
  }
  r.transport = proto == 6 ? Transport::Tcp : proto == 17 ? Transport::Udp : Transport::Other;
  if (r.transport != Transport::Other && first_fragment && n >= l4 + 4) {
    r.src_port = be16(p + l4);
    r.dst_port = be16(p + l4 + 2);
  }
  return true;
}

}  // namespace

PcapStats read_pcap(std::istream& in, const std::function<void(const FlowRecord&)>& sink) {
  std::array<std::uint8_t, 24> gh{};
  if (!in.read(reinterpret_cast<char*>(gh.data()), gh.size())) fail(Errc::Truncated, "pcap global header");
  Decoder d;
  std::uint32_t magic = d.u32(gh.data());
  bool nanos = false;
  if (magic == kMagicMicros || magic == kMagicNanos) {
    nanos = magic == kMagicNanos;
  } else {
    d.swap = true;
    magic = d.u32(gh.data());
    if (magic != kMagicMicros && magic != kMagicNanos) fail(Errc::ParseError, "not a classic pcap file");
    nanos = magic == kMagicNanos;
  }
  std::uint32_t link = d.u32(gh.data() + 20) & 0x0fffffff;

  PcapStats stats;
  std::array<std::uint8_t, 16> rh{};
  std::vector<std::uint8_t> buf;
  while (in.read(reinterpret_cast<char*>(rh.data()), rh.size())) {
    std::uint32_t sec = d.u32(rh.data());
    std::uint32_t frac = d.u32(rh.data() + 4);
    std::uint32_t incl = d.u32(rh.data() + 8);
    std::uint32_t orig = d.u32(rh.data() + 12);
    if (incl > kMaxWireLength) fail(Errc::ParseError, "pcap record larger than any snaplen");
    buf.resize(incl);
    if (!in.read(reinterpret_cast<char*>(buf.data()), incl)) fail(Errc::Truncated, "pcap record body");
    ++stats.packets;

    FlowRecord r;
    r.start_us = static_cast<std::int64_t>(sec) * 1'000'000 + (nanos ? frac / 1000 : frac);
    r.packets = 1;
    r.bytes = std::max<std::uint32_t>(1, std::min(orig, kMaxWireLength));
    long off = ip_offset(link, buf.data(), buf.size());
    if (off < 0 || !decode_ip(buf.data() + off, buf.size() - static_cast<std::size_t>(off), r)) {
      ++stats.skipped;
      continue;
    }
    sink(r);
    ++stats.flows;
  }
  if (in.gcount() != 0) fail(Errc::Truncated, "pcap record header");
  return stats;
}

PcapStats read_pcap(ByteView file, const std::function<void(const FlowRecord&)>& sink) {
  std::istringstream in(std::string(file.begin(), file.end()));
  return read_pcap(in, sink);
}

PcapStats read_pcap_file(const std::string& path, const std::function<void(const FlowRecord&)>& sink) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path);
  return read_pcap(in, sink);
}

}  // namespace qr::traffic
