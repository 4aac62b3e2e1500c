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

#include <optional>
#include <vector>

#include "common/bytes.hpp"

namespace qr::wire {

// DER certificates, leaf first.
struct CertificateChain {
  std::vector<Bytes> entries;

  bool operator==(const CertificateChain&) const = default;
};

enum class CertEncoding { Zlib, Raw };

// CRT value layout: one type octet per certificate, terminated by 0x00.
//   0x01  zlib-compressed; its (u32 LE length, DER) record lives in the zlib
//         stream that follows the terminator, preceded by the u32 LE
//         uncompressed length of that stream.
//   0x02  cached (8-octet hash follows)         -> unsupported
//   0x03  common set (8-octet hash, u32 index)  -> unsupported
//   0x04  raw, followed inline by u32 LE length and the DER octets.
// A zlib stream requesting a preset dictionary is likewise unsupported.
Bytes encode_cert_chain(const CertificateChain& chain, CertEncoding encoding = CertEncoding::Zlib);

struct CertChainDecode {
  std::optional<CertificateChain> chain;  // absent iff unsupported_compression
  bool unsupported_compression = false;
};

// Throws ParseError on framing errors, zlib corruption or any entry that is
// not a complete DER certificate.
CertChainDecode decode_cert_chain(ByteView data);

// True if `der` is exactly one DER-encoded X.509 certificate.
bool is_der_certificate(ByteView der);

}  // namespace qr::wire
