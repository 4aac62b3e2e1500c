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

#include "handshake/certificates.hpp"

#include <memory>

#include <openssl/pem.h>
#include <openssl/x509.h>
#include <openssl/x509v3.h>

#include "common/text.hpp"

namespace qr::handshake {

namespace {

struct X509Deleter {
  void operator()(X509* x) const { X509_free(x); }
};
using X509Ptr = std::unique_ptr<X509, X509Deleter>;

X509Ptr parse_der(ByteView der) {
  const unsigned char* p = der.data();
  X509Ptr x(d2i_X509(nullptr, &p, static_cast<long>(der.size())));
  if (!x || p != der.data() + der.size()) fail(Errc::ParseError, "malformed DER certificate");
  return x;
}

std::string normalize_host(std::string_view h) {
  auto s = to_lower(trim(h));
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

std::vector<Bytes> load_certificates(std::string_view contents) {
  std::vector<Bytes> out;
  if (contents.find("-----BEGIN") == std::string_view::npos) {
    parse_der(as_bytes(contents));
    out.push_back(to_bytes(contents));
    return out;
  }
  std::unique_ptr<BIO, decltype(&BIO_free)> bio(BIO_new_mem_buf(contents.data(), static_cast<int>(contents.size())),
                                                 BIO_free);
  while (true) {
    X509Ptr x(PEM_read_bio_X509(bio.get(), nullptr, nullptr, nullptr));
    if (!x) break;
    int len = i2d_X509(x.get(), nullptr);
    Bytes der(static_cast<std::size_t>(len));
    unsigned char* p = der.data();
    i2d_X509(x.get(), &p);
    out.push_back(std::move(der));
  }
  if (out.empty()) fail(Errc::ParseError, "no certificates in PEM input");
  return out;
}

std::string der_to_pem(ByteView der) {
  auto x = parse_der(der);
  std::unique_ptr<BIO, decltype(&BIO_free)> bio(BIO_new(BIO_s_mem()), BIO_free);
  PEM_write_bio_X509(bio.get(), x.get());
  char* data = nullptr;
  long n = BIO_get_mem_data(bio.get(), &data);
  return std::string(data, static_cast<std::size_t>(n));
}

TrustAnchors TrustAnchors::from_file(const std::string& path) {
  return TrustAnchors{load_certificates(read_file(path))};
}

bool dns_name_matches(std::string_view pattern, std::string_view host) {
  auto p = normalize_host(pattern);
  auto h = normalize_host(host);
  if (p.empty() || h.empty()) return false;
  if (p.find('*') == std::string::npos) return p == h;
  if (p.size() < 2 || p[0] != '*' || p[1] != '.') return false;
  auto suffix = std::string_view(p).substr(1);  // ".example.com"
  if (suffix.find('*') != std::string_view::npos) return false;
  if (std::count(suffix.begin(), suffix.end(), '.') < 2) return false;
  if (h.size() <= suffix.size() || !h.ends_with(suffix)) return false;
  auto label = std::string_view(h).substr(0, h.size() - suffix.size());
  return !label.empty() && label.find('.') == std::string_view::npos;
}

std::vector<std::string> leaf_dns_names(ByteView der) {
  auto x = parse_der(der);
  std::vector<std::string> out;
  auto* names = static_cast<GENERAL_NAMES*>(X509_get_ext_d2i(x.get(), NID_subject_alt_name, nullptr, nullptr));
  if (!names) return out;
  for (int i = 0; i < sk_GENERAL_NAME_num(names); ++i) {
    const GENERAL_NAME* n = sk_GENERAL_NAME_value(names, i);
    if (n->type != GEN_DNS) continue;
    const auto* s = n->d.dNSName;
    out.emplace_back(reinterpret_cast<const char*>(ASN1_STRING_get0_data(s)), static_cast<std::size_t>(ASN1_STRING_length(s)));
  }
  GENERAL_NAMES_free(names);
  return out;
}

std::string leaf_common_name(ByteView der) {
  auto x = parse_der(der);
  X509_NAME* subject = X509_get_subject_name(x.get());
  int idx = X509_NAME_get_index_by_NID(subject, NID_commonName, -1);
  if (idx < 0) return {};
  ASN1_STRING* data = X509_NAME_ENTRY_get_data(X509_NAME_get_entry(subject, idx));
  unsigned char* utf8 = nullptr;
  int len = ASN1_STRING_to_UTF8(&utf8, data);
  if (len < 0) return {};
  std::string out(reinterpret_cast<char*>(utf8), static_cast<std::size_t>(len));
  OPENSSL_free(utf8);
  return out;
}

CertVerdict validate_certificate(const wire::CertificateChain& chain, std::string_view sni, const TrustAnchors& anchors,
                                 SystemTime now) {
  if (chain.entries.empty()) fail(Errc::InvalidArgument, "empty certificate chain");
  std::vector<X509Ptr> parsed;
  for (const auto& der : chain.entries) parsed.push_back(parse_der(der));

  CertVerdict v;
  X509* leaf = parsed.front().get();

  std::unique_ptr<X509_STORE, decltype(&X509_STORE_free)> store(X509_STORE_new(), X509_STORE_free);
  std::vector<X509Ptr> anchor_certs;
  for (const auto& der : anchors.certificates) {
    anchor_certs.push_back(parse_der(der));
    X509_STORE_add_cert(store.get(), anchor_certs.back().get());
  }
  std::unique_ptr<STACK_OF(X509), void (*)(STACK_OF(X509)*)> untrusted(
      sk_X509_new_null(), [](STACK_OF(X509)* s) { sk_X509_free(s); });
  for (std::size_t i = 1; i < parsed.size(); ++i) sk_X509_push(untrusted.get(), parsed[i].get());

  std::unique_ptr<X509_STORE_CTX, decltype(&X509_STORE_CTX_free)> ctx(X509_STORE_CTX_new(), X509_STORE_CTX_free);
  if (!anchors.certificates.empty() && X509_STORE_CTX_init(ctx.get(), store.get(), leaf, untrusted.get()) == 1) {
    X509_VERIFY_PARAM* param = X509_STORE_CTX_get0_param(ctx.get());
    X509_VERIFY_PARAM_set_flags(param, X509_V_FLAG_NO_CHECK_TIME | X509_V_FLAG_PARTIAL_CHAIN);
    v.chain_ok = X509_verify_cert(ctx.get()) == 1;
  }

  if (!sni.empty()) {
    for (const auto& name : leaf_dns_names(chain.entries.front())) {
      if (dns_name_matches(name, sni)) {
        v.name_match = true;
        break;
      }
    }
  }

  auto t = static_cast<time_t>(to_unix_micros(now) / 1000000);
  // X509_cmp_time: -1 when the ASN.1 time is at or before t, 1 after, 0 on error.
  v.not_expired = X509_cmp_time(X509_get0_notBefore(leaf), &t) == -1 && X509_cmp_time(X509_get0_notAfter(leaf), &t) == 1;

  v.valid = v.chain_ok && v.name_match && v.not_expired;
  return v;
}

Sha256Digest fingerprint_certificate(const wire::CertificateChain& chain) {
  if (chain.entries.empty()) fail(Errc::InvalidArgument, "empty certificate chain");
  return sha256(chain.entries.front());
}

std::string fingerprint_hex(const wire::CertificateChain& chain) { return hex_encode(fingerprint_certificate(chain)); }

}  // namespace qr::handshake
