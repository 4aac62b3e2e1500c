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

#include <cstdlib>
#include <set>

#include "campaign/campaign.hpp"
#include "campaign/state.hpp"
#include "common/text.hpp"
#include "mock/responder.hpp"
#include "probe/engine.hpp"
#include "support/campaign_harness.hpp"
#include "support/mock_targets.hpp"

namespace qr::campaign {
namespace {

const std::string kFixtures = QR_FIXTURE_DIR;

CampaignConfig probe_config(const test::TempDir& dir, std::size_t n, std::uint16_t port) {
  dir.write("targets.txt", test::target_list(n, port));
  auto text = R"({"kind":"probe-ips","input":"targets.txt","out":"out/results.jsonl","state_dir":"state",
                 "rate":20000,"timeout":1.5,"checkpoint_every":50})";
  return parse_config(text, dir.file(""));
}

TEST(Config, ParsesAndResolvesPaths) {
  auto c = parse_config(R"({"kind":"traffic","inputs":["a.csv",{"path":"/abs/b.csv","date":"2017-01-01"}],
                            "out":"o.csv","format":"csv","local_asns":[3320],"weight":"packets"})",
                        "/base");
  EXPECT_EQ(c.kind, CampaignKind::Traffic);
  EXPECT_EQ(c.inputs[0].path, "/base/a.csv");
  EXPECT_EQ(c.inputs[1].path, "/abs/b.csv");
  EXPECT_EQ(c.inputs[1].date, "2017-01-01");
  EXPECT_EQ(c.out, "/base/o.csv");
  EXPECT_TRUE(c.weight_packets);
  EXPECT_NO_THROW(c.validate());
  auto again = parse_config(c.snapshot(), "");
  EXPECT_EQ(again.snapshot(), c.snapshot());
}

TEST(Config, Rejects) {
  for (const char* bad : {R"({"kind":"probe"})", R"({"rates":5})", R"({"port":0})", R"({"rate":"fast"})", "[1]",
                          "{", R"({"format":"xml"})"}) {
    try {
      parse_config(bad, "/");
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::ConfigInvalid) << bad;
    }
  }
  auto c = parse_config(R"({"kind":"probe-ips","out":"x"})", "/");
  EXPECT_THROW(c.validate(), Error);
  c = parse_config(R"({"kind":"probe-ips","out":"x","input":"y","rate":0})", "/");
  EXPECT_THROW(c.validate(), Error);
}

TEST(Campaign, ProbeKillAndResumeYieldsEveryTargetOnce) {
  auto responder = mock::Responder::serve(mock::ResponderProfile{}, test::any_v4());
  test::TempDir dir("probe");
  auto cfg = probe_config(dir, 1000, responder->port());

  CampaignOptions o;
  o.abort_after = 500;
  try {
    run_campaign(cfg, o);
    FAIL() << "abort hook did not fire";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Interrupted);
  }
  auto id = derive_campaign_id(cfg);
  auto state = CampaignState::load(state_path(cfg.state_dir, id));
  ASSERT_TRUE(state);
  EXPECT_FALSE(state->complete);
  EXPECT_GE(state->cursor, 450u);
  EXPECT_LE(state->cursor, 500u);

  CampaignOptions r;
  r.resume_id = id;
  auto res = run_campaign(cfg, r);
  EXPECT_TRUE(res.resumed);
  EXPECT_EQ(res.cursor, 1000u);
  auto lines = test::read_lines(cfg.out);
  ASSERT_EQ(lines.size(), 1000u);
  std::set<std::string> addrs;
  for (const auto& l : lines) addrs.insert(probe::outcome_from_jsonl(l).target.to_string());
  EXPECT_EQ(addrs.size(), 1000u);
  for (const auto& l : lines) EXPECT_NE(l.find("version_negotiation"), std::string::npos);

  // Output is in input order.
  EXPECT_EQ(probe::outcome_from_jsonl(lines.front()).target.to_string(),
            test::loopback_targets(1, responder->port())[0].to_string());

  // A completed campaign resumes to a no-op.
  auto again = run_campaign(cfg, r);
  EXPECT_EQ(again.records, 0u);
  EXPECT_EQ(test::read_lines(cfg.out).size(), 1000u);
}

TEST(Campaign, ResumeRejectsChangedInput) {
  auto responder = mock::Responder::serve(mock::ResponderProfile{}, test::any_v4());
  test::TempDir dir("digest");
  auto cfg = probe_config(dir, 200, responder->port());
  CampaignOptions o;
  o.abort_after = 60;
  EXPECT_THROW(run_campaign(cfg, o), Error);
  dir.write("targets.txt", test::target_list(201, responder->port()));
  CampaignOptions r;
  r.resume_id = derive_campaign_id(cfg);
  try {
    run_campaign(cfg, r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ResumeDigestMismatch);
  }
}

TEST(Campaign, CsvFormatAndBlocklistEnv) {
  auto responder = mock::Responder::serve(mock::ResponderProfile{}, test::any_v4());
  test::TempDir dir("csv");
  auto cfg = probe_config(dir, 20, responder->port());
  dir.write("block.txt", "127.0.1.0/29\n");
  setenv("QUIC_RECON_BLOCKLIST", dir.file("block.txt").c_str(), 1);
  CampaignOptions o;
  o.format = OutputFormat::Csv;
  auto res = run_campaign(cfg, o);
  unsetenv("QUIC_RECON_BLOCKLIST");
  auto lines = test::read_lines(cfg.out);
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines[0], "addr,port,verdict,versions,rtt_ms,ts,cid_match");
  EXPECT_EQ(lines.size(), 1u + 20 - 7);  // 127.0.1.1-7 blocked
  EXPECT_EQ(res.records, 13u);
  EXPECT_EQ(split(lines[1], ',')[0], "127.0.1.8");
  EXPECT_EQ(split(lines[1], ',')[3], "Q035");
}

TEST(Campaign, StopFlagCheckpointsAndResumes) {
  auto responder = mock::Responder::serve(mock::ResponderProfile{}, test::any_v4());
  test::TempDir dir("stop");
  auto cfg = probe_config(dir, 300, responder->port());
  std::atomic<bool> stop{true};
  CampaignOptions o;
  o.stop = &stop;
  auto res = run_campaign(cfg, o);
  EXPECT_TRUE(res.interrupted);
  EXPECT_EQ(res.exit_status, 130);
  CampaignOptions r;
  r.resume_id = res.id;
  auto done = run_campaign(cfg, r);
  EXPECT_FALSE(done.interrupted);
  EXPECT_EQ(test::read_lines(cfg.out).size(), 300u);
}

TEST(Campaign, TrafficAndSharesReport) {
  test::TempDir dir("traffic");
  auto text = R"({"kind":"traffic","inputs":[")" + kFixtures + R"(/traffic/isp_flows.csv"],"prefixes":")" + kFixtures +
              R"(/traffic/prefixes.csv","operators":")" + kFixtures +
              R"(/traffic/operators.txt","local_prefixes":["10.0.0.0/8"],"out":"ts.csv","format":"csv","state_dir":"s"})";
  auto cfg = parse_config(text, dir.file(""));
  auto res = run_campaign(cfg, {});
  ASSERT_EQ(res.artifacts.size(), 2u);
  auto ts = test::read_lines(res.artifacts[0]);
  EXPECT_EQ(ts[0], "bin_start,protocol,operator,bytes,overall_share");
  EXPECT_EQ(ts.size(), 1u + 2 * 4 * 3);  // 10-minute span, 5-minute bins
  auto table = test::read_lines(res.artifacts[1]);
  ASSERT_EQ(table.size(), 1u + 1 + 3 + 3);
  EXPECT_EQ(table[0], "metric,operator,HTTP,HTTPS,QUIC");
  EXPECT_EQ(table[1], "overall,all,37.70,40.10,7.80");

  cfg.kind = CampaignKind::Report;
  cfg.report = ReportType::Shares;
  cfg.out = dir.file("shares.csv");
  run_campaign(cfg, {});
  EXPECT_EQ(test::read_lines(cfg.out), table);
}

TEST(Campaign, ScanDomainsWithStaticResolver) {
  mock::ResponderProfile p;
  p.supported_versions = {wire::VersionTag::from("Q099")};
  auto responder = mock::Responder::serve(p, test::any_v4());
  test::TempDir dir("domains");
  dir.write("zone.txt", "a.example\nb.example.\nnx.example\nbogon.example\n");
  dir.write("dns.txt", "a.example 127.0.2.1\nb.example 127.0.2.2\nnx.example NXDOMAIN\nbogon.example 10.0.0.1\n");
  auto text = R"({"kind":"scan-domains","input":"zone.txt","resolver":"dns.txt","out":"v.jsonl","state_dir":"s",
                  "timeout":1,"workers":4,"bogons":["10.0.0.0/8"],"port":)" + std::to_string(responder->port()) + "}";
  auto cfg = parse_config(text, dir.file(""));
  auto res = run_campaign(cfg, {});
  EXPECT_EQ(test::read_lines(cfg.out).size(), 4u);
  ASSERT_EQ(res.artifacts.size(), 2u);
  auto summary = read_file(res.artifacts[1]);
  EXPECT_NE(summary.find("domains,4,100.00"), std::string::npos) << summary;
  EXPECT_NE(summary.find("dns_failure,1,25.00"), std::string::npos) << summary;
  EXPECT_NE(summary.find("invalid_ip,1,25.00"), std::string::npos) << summary;
  EXPECT_NE(summary.find("version_failed,2,50.00"), std::string::npos) << summary;
}

TEST(Campaign, SelftestPasses) {
  CampaignConfig cfg;
  cfg.kind = CampaignKind::Selftest;
  std::ostringstream log;
  CampaignOptions o;
  o.log = &log;
  auto res = run_campaign(cfg, o);
  EXPECT_EQ(res.exit_status, 0) << log.str();
  EXPECT_EQ(log.str().find("FAIL"), std::string::npos) << log.str();
}

}  // namespace
}  // namespace qr::campaign
