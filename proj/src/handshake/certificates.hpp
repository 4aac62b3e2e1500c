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

#include <string>
#include <string_view>
#include <vector>

#include "common/crypto.hpp"
#include "common/time_util.hpp"
#include "wire/cert_chain.hpp"

namespace qr::handshake {

struct CertVerdict {
  bool valid = false;  // chain_ok && name_match && not_expired
  bool chain_ok = false;
  bool name_match = false;
  bool not_expired = false;

  bool operator==(const CertVerdict&) const = default;
};

// DER certificates used as verification roots.
struct TrustAnchors {
  std::vector<Bytes> certificates;

  // PEM bundle (any number of CERTIFICATE blocks) or a single DER file.
  static TrustAnchors from_file(const std::string& path);
};

// Parses every CERTIFICATE block of a PEM text; a non-PEM input is treated
// as one DER certificate. Throws ParseError.
std::vector<Bytes> load_certificates(std::string_view contents);
std::string der_to_pem(ByteView der);

// chain_ok: the chain verifies to one of `anchors` (signature path only,
// validity periods ignored). name_match: `sni` matches a subjectAltName
// DNS-ID of the leaf. not_expired: `now` lies within the leaf validity.
// Throws ParseError if any entry is not a DER certificate, InvalidArgument
// on an empty chain.
CertVerdict validate_certificate(const wire::CertificateChain& chain, std::string_view sni, const TrustAnchors& anchors,
                                 SystemTime now);

// RFC 6125 DNS-ID match; '*' is honoured only as the complete left-most
// label and never matches a public-suffix-like two-label pattern ("*.com").
bool dns_name_matches(std::string_view pattern, std::string_view host);

// SHA-256 over the leaf DER.
Sha256Digest fingerprint_certificate(const wire::CertificateChain& chain);
std::string fingerprint_hex(const wire::CertificateChain& chain);

std::string leaf_common_name(ByteView der);
std::vector<std::string> leaf_dns_names(ByteView der);

}  // namespace qr::handshake
