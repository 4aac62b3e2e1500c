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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "common/error.hpp"
#include "report/attribution.hpp"
#include "report/cert_clusters.hpp"
#include "report/version_sets.hpp"
#include "support/report_fixtures.hpp"

namespace qr::report {
namespace {

net::IpAddress ip(const char* s) { return *net::IpAddress::parse(s); }

struct Maps {
  traffic::PrefixMap pm;
  traffic::OperatorMap om;
  Maps() {
    pm.add(*net::Cidr::parse("172.217.0.0/16"), 15169);
    pm.add(*net::Cidr::parse("23.0.0.0/12"), 20940);
    pm.add(*net::Cidr::parse("5.5.0.0/16"), 64500);
    om = traffic::OperatorMap::parse("google: 15169\nakamai: 20940\n");
  }
};

TEST(Attribution, RdnsRuleWithoutAsn) {
  Maps m;
  HostObservation h{ip("5.5.1.2"), {}, "a1-2.deploy.static.akamaitechnologies.com.", {}, {}};
  auto r = attribute_host(h, m.pm, m.om, AttributionRules::defaults());
  EXPECT_EQ(r.operator_name, "akamai");
  EXPECT_EQ(r.tier, AttributionTier::Rdns);
  EXPECT_EQ(r.asn, 64500u);
}

TEST(Attribution, AsnBeatsRules) {
  Maps m;
  HostObservation h{ip("172.217.1.1"), {}, "x.deploy.static.akamaitechnologies.com", "ab", {"a248.e.akamai.net"}};
  auto r = attribute_host(h, m.pm, m.om, AttributionRules::defaults());
  EXPECT_EQ(r.operator_name, "google");
  EXPECT_EQ(r.tier, AttributionTier::Asn);
}

TEST(Attribution, CertBeatsRdnsAndFirstRuleWins) {
  Maps m;
  auto rules = AttributionRules::parse("cert *.EXAMPLE.net first\ncert www.example.net second\nrdns *.example.net third\n");
  HostObservation h{ip("9.9.9.9"), {}, "host.example.net", {}, {"cdn.test", "WWW.example.net"}};
  auto r = attribute_host(h, m.pm, m.om, rules);
  EXPECT_EQ(r.operator_name, "first");
  EXPECT_EQ(r.tier, AttributionTier::Cert);
  h.cert_names.clear();
  EXPECT_EQ(attribute_host(h, m.pm, m.om, rules).operator_name, "third");
}

TEST(Attribution, UnknownAndDeterminism) {
  Maps m;
  HostObservation h{ip("9.9.9.9"), 3320, "dyn.example.org", {}, {"foo.com"}};
  auto a = attribute_host(h, m.pm, m.om, AttributionRules::defaults());
  EXPECT_EQ(a.operator_name, kUnknownOperator);
  EXPECT_EQ(a.tier, AttributionTier::None);
  EXPECT_EQ(a, attribute_host(h, m.pm, m.om, AttributionRules::defaults()));
  EXPECT_EQ(attribution_to_jsonl(a),
            R"({"addr":"9.9.9.9","asn":3320,"rdns":"dyn.example.org","cert_fingerprint":null,"operator":"unknown","tier":"none"})");
}

TEST(Attribution, DefaultsMatchDataFile) {
  auto file = AttributionRules::from_file(std::string(QR_DATA_DIR) + "/attribution_rules.txt");
  auto def = AttributionRules::defaults();
  ASSERT_EQ(file.cert.size(), def.cert.size());
  ASSERT_EQ(file.rdns.size(), def.rdns.size());
  for (std::size_t i = 0; i < def.rdns.size(); ++i) EXPECT_EQ(file.rdns[i].pattern, def.rdns[i].pattern);
  for (std::size_t i = 0; i < def.cert.size(); ++i) EXPECT_EQ(file.cert[i].pattern, def.cert[i].pattern);
  EXPECT_THROW(AttributionRules::parse("dns *.x y\n"), Error);
  EXPECT_NO_THROW(traffic::OperatorMap::from_file(std::string(QR_DATA_DIR) + "/operators.txt"));
}

probe::ProbeRecord capable(const char* addr, std::vector<std::string> versions) {
  probe::ProbeRecord r;
  r.target = {ip(addr), 443};
  r.outcome.verdict = versions.empty() ? probe::Verdict::PublicReset : probe::Verdict::VersionNegotiation;
  for (const auto& v : versions) r.outcome.versions.push_back(wire::VersionTag::from(v));
  return r;
}

TEST(VersionSets, Canonicalization) {
  EXPECT_EQ(canonical_version_set({"Q035", "Q034", "Q035"}), "Q034,Q035");
  EXPECT_EQ(canonical_version_set({}), kNoVersions);
  VersionSetAggregator agg;
  agg.add("2017-10-01", capable("1.1.1.1", {"Q035", "Q034"}));
  agg.add("2017-10-01", capable("1.1.1.2", {"Q034", "Q035"}));
  auto s = agg.finish(0);
  EXPECT_EQ(s.counts["2017-10-01"]["Q034,Q035"], 2u);
  EXPECT_EQ(s.capable["2017-10-01"], 2u);
}

TEST(VersionSets, ThresholdFoldsToOther) {
  VersionSetAggregator agg;
  for (int i = 0; i < 5; ++i) agg.add("d1", capable(("1.0.0." + std::to_string(i)).c_str(), {"Q035"}));
  for (int i = 0; i < 2; ++i) agg.add("d1", capable(("2.0.0." + std::to_string(i)).c_str(), {"Q039"}));
  // below threshold on d1 but reaches it on d2: kept on both dates
  for (int i = 0; i < 3; ++i) agg.add("d2", capable(("3.0.0." + std::to_string(i)).c_str(), {"Q039"}));
  auto s = agg.finish(3);
  EXPECT_EQ(s.counts["d1"], (std::map<std::string, std::uint64_t>{{"Q035", 5}, {"Q039", 2}}));
  agg.add("d1", capable("4.0.0.1", {"Q030"}));
  s = agg.finish(3);
  EXPECT_EQ(s.counts["d1"][kOtherSet], 1u);
  EXPECT_EQ(s.capable["d1"], 8u);
}

TEST(VersionSets, ThreeDateRecountAndFiles) {
  std::mt19937_64 rng(3);
  const char* pool[] = {"Q035", "Q036", "Q037", "Q038", "Q039"};
  auto dir = std::filesystem::temp_directory_path() / "qr_versions";
  std::filesystem::create_directories(dir);
  std::vector<DatedScan> scans;
  std::map<std::string, std::uint64_t> expect_capable;
  for (const char* date : {"2017-08-01", "2017-09-01", "2017-10-01"}) {
    auto path = (dir / (std::string("scan-") + date + ".jsonl")).string();
    std::ofstream out(path);
    for (int i = 0; i < 400; ++i) {
      probe::ProbeOutcome o;
      int kind = static_cast<int>(rng() % 4);
      o.verdict = kind == 0 ? probe::Verdict::Timeout : kind == 1 ? probe::Verdict::PublicReset
                                                                  : probe::Verdict::VersionNegotiation;
      if (o.verdict == probe::Verdict::VersionNegotiation)
        for (const char* v : pool)
          if (rng() % 2) o.versions.push_back(wire::VersionTag::from(v));
      if (o.quic_capable()) ++expect_capable[date];
      out << probe::outcome_to_jsonl({net::IpAddress::v4(0x0a000000u + static_cast<std::uint32_t>(i)), 443}, o)
          << '\n';
    }
    out << "{not json\n";
    scans.push_back({"", path});
  }
  auto s = aggregate_version_sets(scans, 20);
  EXPECT_EQ(s.malformed, 3u);
  for (const auto& [date, row] : s.counts) {
    std::uint64_t sum = 0;
    for (const auto& [set, n] : row) sum += n;
    EXPECT_EQ(sum, expect_capable[date]) << date;
    EXPECT_EQ(s.capable[date], sum);
  }
  EXPECT_EQ(s.counts.size(), 3u);
  EXPECT_EQ(date_from_path("/x/2019-01-02/scan-2017-10-01.jsonl"), "2017-10-01");
  std::filesystem::remove_all(dir);
}

TEST(CertClusters, SimpleCoverage) {
  CertClusterer c;
  for (int i = 0; i < 95; ++i) c.add("aa", "*.google.com");
  for (int i = 0; i < 5; ++i) c.add("fp" + std::to_string(i), "x");
  c.add_without_cert();
  auto r = c.finish();
  EXPECT_EQ(r.hosts_with_certs, 100u);
  EXPECT_EQ(r.hosts_without_certs, 1u);
  EXPECT_DOUBLE_EQ(r.coverage_percent(1), 95.0);
  EXPECT_EQ(r.clusters[0].common_name, "*.google.com");
  EXPECT_DOUBLE_EQ(r.coverage_percent(1000), 100.0);
}

TEST(CertClusters, AllDistinctIsLinear) {
  CertClusterer c;
  for (int i = 0; i < 50; ++i) c.add("fp" + std::to_string(i), "");
  auto r = c.finish();
  for (std::size_t n = 1; n <= 50; ++n) EXPECT_DOUBLE_EQ(r.coverage_percent(n), 2.0 * static_cast<double>(n));
}

TEST(CertClusters, JsonlAndFirstName) {
  CertClusterer c;
  c.add_line(R"({"host":"a","status":"quic_enabled","cert_fingerprints":["f1","f9"],"leaf_cn":"first.example"})");
  c.add_line(R"({"host":"b","status":"quic_enabled","cert_fingerprints":["f1"],"leaf_cn":"second.example"})");
  c.add_line(R"({"host":"c","status":"timeout","cert_fingerprints":[]})");
  c.add_line("garbage");
  auto r = c.finish();
  ASSERT_EQ(r.clusters.size(), 1u);
  EXPECT_EQ(r.clusters[0].common_name, "first.example");
  EXPECT_EQ(r.clusters[0].hosts, 2u);
  EXPECT_EQ(r.hosts_without_certs, 1u);
  EXPECT_EQ(r.malformed, 1u);
  EXPECT_EQ(r.to_csv(), "rank,fingerprint,common_name,hosts,cumulative_percent\n1,f1,\"first.example\",2,100.00\n");
}

TEST(CertClusters, ConstructedDistribution) {
  auto counts = test::certificate_distribution();
  ASSERT_EQ(counts.size(), 320u);
  CertClusterer c;
  std::mt19937_64 rng(1);
  std::vector<std::uint32_t> order;
  for (std::uint32_t i = 0; i < counts.size(); ++i)
    for (std::uint64_t k = 0; k < counts[i]; ++k) order.push_back(i);
  std::shuffle(order.begin(), order.end(), rng);
  for (auto i : order) c.add("fp" + std::to_string(i), "cn" + std::to_string(i));
  auto r = c.finish();
  EXPECT_EQ(r.hosts_with_certs, 617590u);
  EXPECT_NEAR(r.coverage_percent(5), 95.41, 0.01);
  EXPECT_NEAR(r.coverage_percent(10), 99.28, 0.01);
  for (std::size_t i = 1; i < r.clusters.size(); ++i)
    EXPECT_GE(r.clusters[i].cumulative_hosts, r.clusters[i - 1].cumulative_hosts);
}

}  // namespace
}  // namespace qr::report
