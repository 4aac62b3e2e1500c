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

#include <gtest/gtest.h>

#include "common/text.hpp"
#include "handshake/certificates.hpp"
#include "mock/test_certificate.hpp"

namespace qr::handshake {
namespace {

std::string fixture(const std::string& name) { return std::string(QR_FIXTURE_DIR) + "/" + name; }

wire::CertificateChain chain_from(const std::string& name) {
  wire::CertificateChain c;
  c.entries = load_certificates(read_file(fixture(name)));
  return c;
}

SystemTime at(const char* iso) { return parse_iso8601_utc(iso); }

TEST(DnsName, ExactAndWildcard) {
  EXPECT_TRUE(dns_name_matches("example.com", "EXAMPLE.com"));
  EXPECT_TRUE(dns_name_matches("*.example.com", "www.example.com"));
  EXPECT_FALSE(dns_name_matches("*.example.com", "example.com"));
  EXPECT_FALSE(dns_name_matches("*.example.com", "a.b.example.com"));
  EXPECT_FALSE(dns_name_matches("w*.example.com", "www.example.com"));
  EXPECT_FALSE(dns_name_matches("*.com", "example.com"));
  EXPECT_FALSE(dns_name_matches("example.com", "example.org"));
}

TEST(Validate, SelfSignedFixture) {
  auto chain = chain_from("example_com.pem");
  TrustAnchors anchors{chain.entries};
  auto v = validate_certificate(chain, "www.example.com", anchors, at("2030-01-01T00:00:00Z"));
  EXPECT_TRUE(v.valid);
  EXPECT_EQ(fingerprint_hex(chain), "82f821ff915870b69c273586043f100e22826a8eb9c0987e99f048582a5c21c3");
  EXPECT_EQ(leaf_common_name(chain.entries[0]), "example.com");

  EXPECT_FALSE(validate_certificate(chain, "other.org", anchors, at("2030-01-01T00:00:00Z")).name_match);
  auto late = validate_certificate(chain, "example.com", anchors, at("2050-01-01T00:00:00Z"));
  EXPECT_TRUE(late.chain_ok);
  EXPECT_FALSE(late.not_expired);
  EXPECT_FALSE(late.valid);
  EXPECT_FALSE(validate_certificate(chain, "example.com", anchors, at("2020-01-01T00:00:00Z")).not_expired);
}

TEST(Validate, IssuedLeafNeedsItsCa) {
  auto leaf = chain_from("leaf_example_net.pem");
  auto ca = TrustAnchors::from_file(fixture("test_ca.pem"));
  auto wrong = TrustAnchors::from_file(fixture("example_com.pem"));
  auto now = at("2030-01-01T00:00:00Z");
  EXPECT_TRUE(validate_certificate(leaf, "img.cdn.example.net", ca, now).valid);
  EXPECT_FALSE(validate_certificate(leaf, "www.example.net", wrong, now).chain_ok);
  EXPECT_TRUE(validate_certificate(leaf, "www.example.net", wrong, now).name_match);
  EXPECT_EQ(fingerprint_hex(leaf), "e87684811646761c4026a8b5abffc88eda45f095f40c009e1a49e495e76b6739");
}

TEST(Validate, GeneratedChain) {
  using namespace std::chrono_literals;
  auto now = std::chrono::system_clock::now();
  mock::CertificateRequest ca_req{"Gen CA", {}, now - 24h, now + 24h * 365, true, 7};
  auto ca = mock::issue_test_certificate(ca_req);
  mock::CertificateRequest leaf_req{"svc.test", {"svc.test"}, now - 1h, now + 1h, false, 8};
  auto leaf = mock::issue_test_certificate(leaf_req, &ca);

  wire::CertificateChain chain{{leaf.der, ca.der}};
  TrustAnchors anchors{{ca.der}};
  EXPECT_TRUE(validate_certificate(chain, "svc.test", anchors, now).valid);
  EXPECT_FALSE(validate_certificate(chain, "svc.test", anchors, now + 2h).not_expired);
  EXPECT_EQ(leaf_dns_names(leaf.der), std::vector<std::string>{"svc.test"});

  auto self = mock::issue_self_signed("solo.test");
  wire::CertificateChain solo{{self.der}};
  EXPECT_FALSE(validate_certificate(solo, "solo.test", anchors, now).chain_ok);
  EXPECT_TRUE(validate_certificate(solo, "solo.test", TrustAnchors{{self.der}}, now).valid);
}

TEST(Validate, RejectsGarbage) {
  wire::CertificateChain junk{{Bytes{1, 2, 3}}};
  EXPECT_THROW(validate_certificate(junk, "x", {}, std::chrono::system_clock::now()), Error);
  EXPECT_THROW(validate_certificate({}, "x", {}, std::chrono::system_clock::now()), Error);
}

TEST(Pem, RoundTrip) {
  auto chain = chain_from("example_com.pem");
  auto again = load_certificates(der_to_pem(chain.entries[0]));
  ASSERT_EQ(again.size(), 1u);
  EXPECT_EQ(again[0], chain.entries[0]);
}

}  // namespace
}  // namespace qr::handshake
