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

#include "wire/cert_chain.hpp"

#include <limits>

#include <openssl/x509.h>
#include <zlib.h>

namespace qr::wire {

namespace {

constexpr std::uint8_t kEnd = 0x00;
constexpr std::uint8_t kCompressed = 0x01;
constexpr std::uint8_t kCached = 0x02;
constexpr std::uint8_t kCommon = 0x03;
constexpr std::uint8_t kRaw = 0x04;
constexpr std::uint32_t kMaxUncompressed = 16u << 20;

Bytes deflate_all(ByteView in) {
  uLongf cap = compressBound(static_cast<uLong>(in.size()));
  Bytes out(cap);
  if (compress2(out.data(), &cap, in.data(), static_cast<uLong>(in.size()), Z_BEST_COMPRESSION) != Z_OK)
    fail(Errc::InvalidArgument, "zlib compression failed");
  out.resize(cap);
  return out;
}

enum class InflateResult { Ok, NeedDict };

InflateResult inflate_exact(ByteView in, Bytes& out, std::size_t expected) {
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) fail(Errc::ParseError, "inflateInit failed");
  out.assign(expected, 0);
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  auto produced = zs.total_out;
  auto leftover = zs.avail_in;
  inflateEnd(&zs);
  if (rc == Z_NEED_DICT) return InflateResult::NeedDict;
  if (rc != Z_STREAM_END) fail(Errc::ParseError, "zlib stream corrupt or longer than declared");
  if (produced != expected) fail(Errc::ParseError, "zlib stream shorter than declared");
  if (leftover != 0) fail(Errc::ParseError, "trailing octets after zlib stream");
  return InflateResult::Ok;
}

}  // namespace

bool is_der_certificate(ByteView der) {
  const unsigned char* p = der.data();
  X509* x = d2i_X509(nullptr, &p, static_cast<long>(der.size()));
  if (!x) return false;
  bool whole = p == der.data() + der.size();
  X509_free(x);
  return whole;
}

Bytes encode_cert_chain(const CertificateChain& chain, CertEncoding encoding) {
  ByteWriter w;
  if (encoding == CertEncoding::Raw) {
    for (const auto& c : chain.entries) {
      w.u8(kRaw);
      w.u32(static_cast<std::uint32_t>(c.size()));
      w.raw(c);
    }
    w.u8(kEnd);
    return w.take();
  }
  ByteWriter plain;
  for (const auto& c : chain.entries) {
    w.u8(kCompressed);
    plain.u32(static_cast<std::uint32_t>(c.size()));
    plain.raw(c);
  }
  w.u8(kEnd);
  if (!chain.entries.empty()) {
    auto p = plain.take();
    if (p.size() > std::numeric_limits<std::uint32_t>::max()) fail(Errc::OversizeValue, "certificate chain too large");
    w.u32(static_cast<std::uint32_t>(p.size()));
    w.raw(deflate_all(p));
  }
  return w.take();
}

CertChainDecode decode_cert_chain(ByteView data) {
  try {
    ByteReader r(data);
    enum class Slot { Compressed, Raw };
    std::vector<std::pair<Slot, Bytes>> slots;
    bool unsupported = false;
    while (true) {
      auto type = r.u8();
      if (type == kEnd) break;
      switch (type) {
        case kCompressed: slots.emplace_back(Slot::Compressed, Bytes{}); break;
        case kRaw: {
          auto len = r.u32();
          auto der = r.take(len);
          slots.emplace_back(Slot::Raw, Bytes(der.begin(), der.end()));
          break;
        }
        case kCached: r.take(8); unsupported = true; break;
        case kCommon: r.take(12); unsupported = true; break;
        default: fail(Errc::ParseError, "unknown certificate entry type " + std::to_string(type));
      }
    }
    bool any_compressed = false;
    for (const auto& s : slots) any_compressed |= s.first == Slot::Compressed;
    if (any_compressed) {
      auto expected = r.u32();
      if (expected > kMaxUncompressed) fail(Errc::ParseError, "declared certificate block too large");
      Bytes plain;
      if (inflate_exact(r.rest(), plain, expected) == InflateResult::NeedDict) unsupported = true;
      if (!unsupported) {
        ByteReader pr(plain);
        for (auto& s : slots) {
          if (s.first != Slot::Compressed) continue;
          auto len = pr.u32();
          auto der = pr.take(len);
          s.second.assign(der.begin(), der.end());
        }
        if (!pr.empty()) fail(Errc::ParseError, "unused octets in decompressed certificate block");
      }
    } else if (!r.empty()) {
      fail(Errc::ParseError, "trailing octets after certificate list");
    }
    if (unsupported) return CertChainDecode{std::nullopt, true};
    if (slots.empty()) fail(Errc::ParseError, "empty certificate chain");

    CertificateChain chain;
    for (auto& s : slots) {
      if (!is_der_certificate(s.second)) fail(Errc::ParseError, "entry is not a DER certificate");
      chain.entries.push_back(std::move(s.second));
    }
    return CertChainDecode{std::move(chain), false};
  } catch (const Error& e) {
    if (e.code() == Errc::ParseError) throw;
    fail(Errc::ParseError, std::string("certificate chain: ") + e.what());
  }
}

}  // namespace qr::wire
