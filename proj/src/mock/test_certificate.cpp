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

#include "mock/test_certificate.hpp"

#include <openssl/evp.h>
#include <openssl/x509.h>
#include <openssl/x509v3.h>

namespace qr::mock {

SigningKey::SigningKey() : key_(EVP_EC_gen("P-256")) {
  if (!key_) fail(Errc::InvalidArgument, "EC key generation failed");
}

SigningKey::~SigningKey() { EVP_PKEY_free(static_cast<EVP_PKEY*>(key_)); }

SigningKey::SigningKey(SigningKey&& o) noexcept : key_(o.key_) { o.key_ = nullptr; }

SigningKey& SigningKey::operator=(SigningKey&& o) noexcept {
  std::swap(key_, o.key_);
  return *this;
}

namespace {

void add_ext(X509* cert, X509* issuer, int nid, const std::string& value) {
  X509V3_CTX ctx;
  X509V3_set_ctx_nodb(&ctx);
  X509V3_set_ctx(&ctx, issuer, cert, nullptr, nullptr, 0);
  X509_EXTENSION* ext = X509V3_EXT_conf_nid(nullptr, &ctx, nid, value.c_str());
  if (!ext) fail(Errc::InvalidArgument, "bad extension value: " + value);
  X509_add_ext(cert, ext, -1);
  X509_EXTENSION_free(ext);
}

X509* decode(ByteView der) {
  const unsigned char* p = der.data();
  return d2i_X509(nullptr, &p, static_cast<long>(der.size()));
}

}  // namespace

IssuedCertificate issue_test_certificate(const CertificateRequest& request, const IssuedCertificate* issuer) {
  IssuedCertificate out;
  out.key = std::make_shared<SigningKey>();
  auto* key = static_cast<EVP_PKEY*>(out.key->native());

  X509* cert = X509_new();
  X509_set_version(cert, 2);
  ASN1_INTEGER_set_uint64(X509_get_serialNumber(cert), request.serial);
  ASN1_TIME_set(X509_getm_notBefore(cert), static_cast<time_t>(to_unix_micros(request.not_before) / 1000000));
  ASN1_TIME_set(X509_getm_notAfter(cert), static_cast<time_t>(to_unix_micros(request.not_after) / 1000000));
  X509_set_pubkey(cert, key);

  X509_NAME* name = X509_get_subject_name(cert);
  X509_NAME_add_entry_by_txt(name, "CN", MBSTRING_UTF8, reinterpret_cast<const unsigned char*>(request.common_name.c_str()),
                             -1, -1, 0);

  X509* issuer_cert = nullptr;
  if (issuer) {
    issuer_cert = decode(issuer->der);
    if (!issuer_cert) fail(Errc::ParseError, "issuer certificate is not DER");
    X509_set_issuer_name(cert, X509_get_subject_name(issuer_cert));
  } else {
    X509_set_issuer_name(cert, name);
  }

  X509* ext_issuer = issuer_cert ? issuer_cert : cert;
  add_ext(cert, ext_issuer, NID_basic_constraints, request.is_ca ? "critical,CA:TRUE" : "CA:FALSE");
  if (request.is_ca) add_ext(cert, ext_issuer, NID_key_usage, "critical,keyCertSign,cRLSign");
  if (!request.dns_names.empty()) {
    std::string san;
    for (const auto& n : request.dns_names) san += (san.empty() ? "DNS:" : ",DNS:") + n;
    add_ext(cert, ext_issuer, NID_subject_alt_name, san);
  }

  auto* signing_key = issuer ? static_cast<EVP_PKEY*>(issuer->key->native()) : key;
  if (X509_sign(cert, signing_key, EVP_sha256()) <= 0) {
    X509_free(cert);
    if (issuer_cert) X509_free(issuer_cert);
    fail(Errc::InvalidArgument, "certificate signing failed");
  }

  int len = i2d_X509(cert, nullptr);
  out.der.resize(static_cast<std::size_t>(len));
  unsigned char* p = out.der.data();
  i2d_X509(cert, &p);
  X509_free(cert);
  if (issuer_cert) X509_free(issuer_cert);
  return out;
}

IssuedCertificate issue_self_signed(const std::string& host) {
  auto now = std::chrono::system_clock::now();
  CertificateRequest req;
  req.common_name = host;
  req.dns_names = {host};
  req.not_before = now - std::chrono::hours(24);
  req.not_after = now + std::chrono::hours(24 * 3650);
  return issue_test_certificate(req);
}

}  // namespace qr::mock
