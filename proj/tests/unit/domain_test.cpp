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

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "common/text.hpp"
#include "domain/alt_svc.hpp"
#include "domain/scanner.hpp"
#include "domain/similarity.hpp"
#include "domain/zone.hpp"
#include "mock/responder.hpp"
#include "support/generators.hpp"
#include "support/mock_targets.hpp"

namespace qr::domain {
namespace {

using namespace std::chrono_literals;

std::string fixture(const std::string& name) { return std::string(QR_FIXTURE_DIR) + "/" + name; }

TEST(Names, Normalize) {
  EXPECT_EQ(normalize_name("Example.COM."), "example.com");
  EXPECT_THROW(normalize_name(""), Error);
  EXPECT_THROW(normalize_name("a..b"), Error);
  EXPECT_THROW(normalize_name("bad name.com"), Error);
}

TEST(Resolver, StaticFile) {
  auto r = StaticResolver::parse(R"(
# comment
example.com 192.0.2.1,2001:db8::1
gone.example NXDOMAIN
flaky.example	SERVFAIL
)");
  auto a = r.resolve("EXAMPLE.com.");
  EXPECT_EQ(a.status, Resolution::Ok);
  EXPECT_EQ(a.addresses.size(), 2u);
  EXPECT_EQ(r.resolve("gone.example").status, Resolution::NxDomain);
  EXPECT_EQ(r.resolve("flaky.example").status, Resolution::ServFail);
  EXPECT_EQ(r.resolve("unknown.example").status, Resolution::NxDomain);
  EXPECT_THROW(StaticResolver::parse("x.com 999.1.1.1"), Error);
}

TEST(Resolver, SystemLocalhost) {
  SystemResolver r;
  auto rec = r.resolve("localhost");
  ASSERT_EQ(rec.status, Resolution::Ok);
  EXPECT_FALSE(rec.addresses.empty());
  EXPECT_EQ(r.resolve("does-not-exist.invalid").status, Resolution::NxDomain);
}

class ScanDomainTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(21);
    profile_ = test::random_rej_profile(rng, "shop.example");
    profile_.supported_versions = {wire::VersionTag::from("Q035")};
    responder_ = mock::Responder::serve(profile_, test::any_v4());
    cfg_.port = responder_->port();
    cfg_.bogons = net::CidrSet{};  // loopback stands in for the Internet here
    cfg_.handshake.timeout = 1s;
    cfg_.anchors.certificates = {profile_.cert_inventory["shop.example"].entries.front()};
  }

  mock::ResponderProfile profile_;
  std::unique_ptr<mock::Responder> responder_;
  DomainScanConfig cfg_;
  StaticResolver resolver_;
};

TEST_F(ScanDomainTest, QuicEnabledWithValidCertificate) {
  resolver_.add("shop.example", {*net::IpAddress::parse("127.0.0.2")});
  auto v = scan_domain("shop.example", resolver_, cfg_);
  EXPECT_EQ(v.category, Category::QuicEnabled);
  EXPECT_TRUE(v.cert_valid);
  EXPECT_EQ(v.address->address.to_string(), "127.0.0.2");
}

TEST_F(ScanDomainTest, WrongNameIsEnabledButNotValid) {
  resolver_.add("other.example", {*net::IpAddress::parse("127.0.0.2")});
  auto v = scan_domain("other.example", resolver_, cfg_);
  EXPECT_EQ(v.category, Category::QuicEnabled);
  EXPECT_FALSE(v.cert_valid);  // no chain for this SNI, falls back to none
}

TEST_F(ScanDomainTest, DnsFailureAndInvalidIp) {
  resolver_.fail("gone.example", Resolution::NxDomain);
  EXPECT_EQ(scan_domain("gone.example", resolver_, cfg_).category, Category::DnsFailure);

  DomainScanConfig strict = cfg_;
  strict.bogons = net::default_bogons();
  resolver_.add("lo.example", {*net::IpAddress::parse("127.0.0.1")});
  EXPECT_EQ(scan_domain("lo.example", resolver_, strict).category, Category::InvalidIP);
  resolver_.add("private.example", {*net::IpAddress::parse("10.1.2.3"), *net::IpAddress::parse("fe80::1")});
  EXPECT_EQ(scan_domain("private.example", resolver_, strict).category, Category::InvalidIP);
}

TEST_F(ScanDomainTest, UnroutableExtraAddressChangesNothing) {
  DomainScanConfig policy = cfg_;
  policy.bogons = net::CidrSet({*net::Cidr::parse("10.0.0.0/8")});
  resolver_.add("shop.example", {*net::IpAddress::parse("127.0.0.2")});
  auto before = scan_domain("shop.example", resolver_, policy);
  resolver_.add("shop.example", {*net::IpAddress::parse("10.0.0.1"), *net::IpAddress::parse("127.0.0.2")});
  auto after = scan_domain("shop.example", resolver_, policy);
  EXPECT_EQ(before.category, after.category);
  EXPECT_EQ(before.cert_valid, after.cert_valid);
  EXPECT_EQ(after.address->address.to_string(), "127.0.0.2");
}

TEST_F(ScanDomainTest, VerdictJsonl) {
  resolver_.add("shop.example", {*net::IpAddress::parse("127.0.0.2")});
  auto v = scan_domain("shop.example", resolver_, cfg_);
  auto back = verdict_from_jsonl(verdict_to_jsonl(v));
  EXPECT_EQ(back.name, "shop.example");
  EXPECT_EQ(back.category, Category::QuicEnabled);
  EXPECT_TRUE(back.cert_valid);
}

TEST(Zone, PublishedColumns) {
  ZoneTally com;
  com.add(Category::QuicEnabled, false, 133630);
  auto s = com.summarize(129360000);
  EXPECT_EQ(format_hundredths(s.percent(Category::QuicEnabled)), "0.10");
  ZoneTally alexa;
  alexa.add(Category::QuicEnabled, false, 11970);
  EXPECT_EQ(format_hundredths(alexa.summarize(999940).percent(Category::QuicEnabled)), "1.20");
}

TEST(Zone, HalfEven) {
  EXPECT_EQ(percent_hundredths(1, 80000), 0);      // 0.00125 -> 0.00
  EXPECT_EQ(percent_hundredths(1, 40000), 0);      // 0.0025 -> 0.00 (even)
  EXPECT_EQ(percent_hundredths(3, 40000), 1);      // 0.0075 -> 0.01
  EXPECT_EQ(percent_hundredths(5, 40000), 1);      // 0.0125 -> 0.01 (even)
  EXPECT_EQ(percent_hundredths(7, 40000), 2);      // 0.0175 -> 0.02
  EXPECT_EQ(percent_hundredths(1, 3), 3333);
  EXPECT_EQ(percent_hundredths(2, 3), 6667);
  EXPECT_EQ(percent_hundredths(0, 0), 0);
}

TEST(Zone, PartitionAndAudit) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ScanVerdict> vs(rng() % 500);
    for (auto& v : vs) {
      v.category = kAllCategories[rng() % 6];
      v.cert_valid = v.category == Category::QuicEnabled && rng() % 2;
    }
    auto s = summarize_zone(vs);
    std::uint64_t sum = 0;
    for (auto c : kAllCategories) {
      sum += s.count(c);
      // |pct/100 - 100*count/total| <= 0.005, in exact integer form.
      if (s.total)
        EXPECT_LE(2 * std::llabs(s.percent(c) * static_cast<std::int64_t>(s.total) -
                                 static_cast<std::int64_t>(s.count(c)) * 10000),
                  static_cast<std::int64_t>(s.total));
    }
    EXPECT_EQ(sum, s.total);
    EXPECT_EQ(s.total, vs.size());

    ZoneTally a, b;
    for (std::size_t i = 0; i < vs.size(); ++i) (i % 2 ? a : b).add(vs[i]);
    a.merge(b);
    auto m = a.summarize();
    EXPECT_EQ(m.counts, s.counts);
    EXPECT_EQ(m.cert_valid, s.cert_valid);
  }
}

TEST(Zone, EmptyAndCsv) {
  auto s = summarize_zone({});
  EXPECT_EQ(s.total, 0u);
  auto csv = zone_summary_csv(s);
  EXPECT_NE(csv.find("domains,0,0.00"), std::string::npos);
  EXPECT_NE(csv.find("timeout,0,0.00"), std::string::npos);

  ZoneTally t;
  t.add(Category::Timeout, false, 3);
  t.add(Category::QuicEnabled, true, 1);
  auto csv2 = zone_summary_csv(t.summarize(5));
  EXPECT_NE(csv2.find("quic_enabled,1,20.00"), std::string::npos);
  EXPECT_NE(csv2.find("valid_certificate,1,20.00"), std::string::npos);
  EXPECT_NE(csv2.find("unaccounted,1,20.00"), std::string::npos);
  EXPECT_THROW(t.summarize(2), Error);
  EXPECT_THROW(t.add(Category::Timeout, true), Error);
}

TEST(AltSvc, ParseGoogleStyle) {
  auto e = parse_alt_svc(R"(quic=":443"; ma=2592000; v="39,38,37,35")");
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].protocol_id, "quic");
  EXPECT_EQ(e[0].host, "");
  EXPECT_EQ(e[0].port, 443);
  EXPECT_EQ(e[0].max_age, 2592000u);
  EXPECT_EQ(e[0].versions, (std::vector<std::string>{"39", "38", "37", "35"}));
}

TEST(AltSvc, ParseListAndEdgeCases) {
  auto e = parse_alt_svc(R"(h2="alt.example:443", quic="[2001:db8::1]:8443"; v="39", h3%2D29=":4433"; ma=60, broken, x=":0")");
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0].host, "alt.example");
  EXPECT_EQ(e[1].host, "2001:db8::1");
  EXPECT_EQ(e[1].port, 8443);
  EXPECT_EQ(e[2].protocol_id, "h3-29");
  bool clear = false;
  EXPECT_TRUE(parse_alt_svc("clear", &clear).empty());
  EXPECT_TRUE(clear);
  EXPECT_TRUE(parse_alt_svc("").empty());
}

TEST(AltSvc, RequiresVersion) {
  AltSvcAdvertisement adv;
  adv.protocols = parse_alt_svc(R"(quic=":443"; v="39,38")");
  EXPECT_TRUE(requires_version(adv, 39));
  EXPECT_FALSE(requires_version(adv, 37));
  adv.protocols = parse_alt_svc(R"(h2=":443"; v="39")");
  EXPECT_FALSE(requires_version(adv, 39));
}

struct PageRow {
  PageMetrics m;
};

std::map<std::string, PageMetrics> expected_metrics() {
  std::map<std::string, PageMetrics> out;
  bool header = true;
  for (const auto& line : read_config_lines(fixture("pages/metrics.csv"))) {
    if (header) {
      header = false;
      continue;
    }
    auto f = split(line, ',');
    PageMetrics m{std::stoll(f[1]), std::stoll(f[2]), std::stoll(f[3]), std::stoll(f[4]), f[5], std::stoll(f[6])};
    out[f[0]] = m;
  }
  return out;
}

TEST(Similarity, MetricsMatchTable) {
  for (const auto& [name, want] : expected_metrics()) {
    auto got = analyze_page(read_file(fixture("pages/" + name + ".html")));
    EXPECT_EQ(got.elements, want.elements) << name;
    EXPECT_EQ(got.anchors, want.anchors) << name;
    EXPECT_EQ(got.images, want.images) << name;
    EXPECT_EQ(got.scripts, want.scripts) << name;
    EXPECT_EQ(got.title, want.title) << name;
    EXPECT_EQ(got.text_length, want.text_length) << name;
  }
}

TEST(Similarity, AgreementRule) {
  EXPECT_TRUE(counts_agree(0, 2));
  EXPECT_FALSE(counts_agree(0, 3));
  EXPECT_TRUE(counts_agree(17, 19));
  EXPECT_FALSE(counts_agree(16, 19));
  EXPECT_TRUE(counts_agree(100, 110));
  EXPECT_TRUE(counts_agree(100, 111));
  EXPECT_FALSE(counts_agree(100, 112));
  EXPECT_TRUE(counts_agree(20, 18));
  EXPECT_FALSE(counts_agree(20, 17));
}

TEST(Similarity, LenientAndSymmetric) {
  std::mt19937_64 rng(8);
  const std::string alphabet = "<>/!-abcimgsrpt \"'=\n";
  for (int i = 0; i < 500; ++i) {
    std::string a, b;
    for (int k = rng() % 300; k > 0; --k) a += alphabet[rng() % alphabet.size()];
    for (int k = rng() % 300; k > 0; --k) b += alphabet[rng() % alphabet.size()];
    EXPECT_EQ(compare_landing_pages(a, b).similar, compare_landing_pages(b, a).similar);
    EXPECT_TRUE(compare_landing_pages(a, a).similar);
  }
  auto m = analyze_page("<p>a <b>bold</b> < 3 <!-- hidden <a> --> <script>var x = '<a>';</script><style>p{}</style>");
  EXPECT_EQ(m.elements, 4);
  EXPECT_EQ(m.anchors, 0);
  EXPECT_EQ(m.scripts, 1);
  EXPECT_EQ(m.text_length, 7);  // "a", "bold", "<", "3"
}

}  // namespace
}  // namespace qr::domain
