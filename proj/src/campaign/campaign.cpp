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

#include "campaign/campaign.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "campaign/state.hpp"
#include "common/crypto.hpp"
#include "common/error.hpp"
#include "common/text.hpp"
#include "common/time_util.hpp"
#include "domain/resolver.hpp"
#include "domain/scanner.hpp"
#include "domain/zone.hpp"
#include "handshake/certificates.hpp"
#include "handshake/client.hpp"
#include "json.hpp"
#include "probe/engine.hpp"
#include "probe/target.hpp"
#include "report/attribution.hpp"
#include "report/cert_clusters.hpp"
#include "report/version_sets.hpp"
#include "traffic/pcap.hpp"
#include "traffic/shares.hpp"

namespace qr::campaign {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::ordered_json;

void note(const CampaignOptions& o, const std::string& msg) {
  if (o.log) *o.log << msg << std::endl;
}

bool stop_requested(const CampaignOptions& o) { return o.stop && o.stop->load(std::memory_order_relaxed); }

// ---- input ----

struct LineJob {
  std::uint64_t index;
  std::string text;
};

// Non-blank, non-comment lines of a text file, numbered from 0.
class LineReader {
 public:
  explicit LineReader(const std::string& path) : in_(path), path_(path) {
    if (!in_) fail(Errc::IoError, "cannot open input " + path);
  }
  std::optional<LineJob> next() {
    std::string line;
    while (std::getline(in_, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      auto t = trim(line);
      if (t.empty()) continue;
      return LineJob{index_++, std::string(t)};
    }
    return std::nullopt;
  }
  void skip(std::uint64_t n) {
    while (index_ < n)
      if (!next()) fail(Errc::ResumeDigestMismatch, "input " + path_ + " shorter than checkpoint cursor");
  }

 private:
  std::ifstream in_;
  std::string path_;
  std::uint64_t index_ = 0;
};

std::string digest_of(const std::vector<std::string>& paths) {
  if (paths.size() == 1) return sha256_file_hex(paths[0]);
  std::string all;
  for (const auto& p : paths) all += sha256_file_hex(p) + "\n";
  auto d = sha256(as_bytes(all));
  return hex_encode(ByteView(d.data(), d.size()));
}

// ---- output ----

const std::vector<std::string>& csv_columns(CampaignKind k) {
  static const std::vector<std::string> probe = {"addr", "port", "verdict", "versions", "rtt_ms", "ts", "cid_match"};
  static const std::vector<std::string> domains = {"domain",  "category", "cert_valid", "resolution",       "addresses",
                                                   "addr",    "version",  "scid_hex",   "cert_fingerprints", "rtt_ms"};
  static const std::vector<std::string> grab = {"host",     "addr", "sni",      "status",     "version",
                                                "scid_hex", "cert_fingerprints", "leaf_cn", "cert_valid", "rtt_ms"};
  switch (k) {
    case CampaignKind::ProbeIps: return probe;
    case CampaignKind::ScanDomains: return domains;
    default: return grab;
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_cell(const ordered_json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return csv_escape(v.get<std::string>());
  if (v.is_array()) {
    std::string joined;
    for (const auto& e : v) {
      if (!joined.empty()) joined += ';';
      joined += e.is_string() ? e.get<std::string>() : e.dump();
    }
    return csv_escape(joined);
  }
  return v.dump();
}

std::string csv_header(CampaignKind k) {
  std::string h;
  for (const auto& c : csv_columns(k)) h += (h.empty() ? "" : ",") + c;
  return h + "\n";
}

std::string csv_row(CampaignKind k, const std::string& json_line) {
  auto j = ordered_json::parse(json_line);
  std::string row;
  bool first = true;
  for (const auto& c : csv_columns(k)) {
    if (!first) row += ',';
    first = false;
    if (j.contains(c)) row += csv_cell(j[c]);
  }
  return row;
}

// Writes records in input order and checkpoints the contiguous prefix.
class Committer {
 public:
  Committer(const CampaignConfig& cfg, const CampaignOptions& opts, CampaignState& state, std::string state_file,
            bool resume)
      : cfg_(cfg), opts_(opts), state_(state), state_file_(std::move(state_file)) {
    namespace fs = std::filesystem;
    if (resume) {
      std::error_code ec;
      auto size = fs::file_size(cfg.out, ec);
      if (ec || size < state.output_offset)
        fail(Errc::ResumeDigestMismatch, "output " + cfg.out + " is shorter than the checkpoint");
      fs::resize_file(cfg.out, state.output_offset);
      out_.open(cfg.out, std::ios::in | std::ios::out | std::ios::binary);
      out_.seekp(0, std::ios::end);
      watermark_ = state.cursor;
    } else {
      if (auto parent = fs::path(cfg.out).parent_path(); !parent.empty()) fs::create_directories(parent);
      out_.open(cfg.out, std::ios::out | std::ios::trunc | std::ios::binary);
      if (out_ && cfg.format == OutputFormat::Csv) out_ << csv_header(cfg.kind);
    }
    if (!out_) fail(Errc::IoError, "cannot open output " + cfg.out);
    last_checkpoint_ = Clock::now();
    checkpointed_cursor_ = watermark_;
    if (!resume) checkpoint(false);
  }

  // `record` is one JSONL object, or nullopt for an input that yields none.
  void commit(std::uint64_t index, std::optional<std::string> record) {
    std::lock_guard lock(mu_);
    pending_.emplace(index, std::move(record));
    while (!pending_.empty() && pending_.begin()->first == watermark_) {
      auto& rec = pending_.begin()->second;
      if (rec) {
        out_ << (cfg_.format == OutputFormat::Csv ? csv_row(cfg_.kind, *rec) : *rec) << '\n';
        ++written_;
      }
      pending_.erase(pending_.begin());
      ++watermark_;
    }
    if (!out_) fail(Errc::IoError, "write to " + cfg_.out + " failed");
    ++commits_;
    if (opts_.abort_after && commits_ >= opts_.abort_after) {
      out_.flush();
      fail(Errc::Interrupted, "aborted after " + std::to_string(commits_) + " records (test hook)");
    }
    auto now = Clock::now();
    if (watermark_ - checkpointed_cursor_ >= cfg_.checkpoint_every ||
        std::chrono::duration<double>(now - last_checkpoint_).count() >= cfg_.checkpoint_seconds)
      checkpoint_locked(false);
  }

  void checkpoint(bool complete) {
    std::lock_guard lock(mu_);
    checkpoint_locked(complete);
  }

  std::uint64_t watermark() const { return watermark_; }
  std::uint64_t written() const { return written_; }
  std::size_t pending() const { return pending_.size(); }

 private:
  void checkpoint_locked(bool complete) {
    out_.flush();
    if (!out_) fail(Errc::IoError, "flush of " + cfg_.out + " failed");
    state_.cursor = watermark_;
    state_.output_offset = static_cast<std::uint64_t>(out_.tellp());
    state_.complete = complete;
    state_.save(state_file_);
    checkpointed_cursor_ = watermark_;
    last_checkpoint_ = Clock::now();
  }

  const CampaignConfig& cfg_;
  const CampaignOptions& opts_;
  CampaignState& state_;
  std::string state_file_;
  std::fstream out_;
  std::mutex mu_;
  std::map<std::uint64_t, std::optional<std::string>> pending_;
  std::uint64_t watermark_ = 0;
  std::uint64_t written_ = 0;
  std::uint64_t commits_ = 0;
  std::uint64_t checkpointed_cursor_ = 0;
  Clock::time_point last_checkpoint_;
};

// ---- line-oriented kinds ----

net::CidrSet load_blocklist(const CampaignConfig& cfg) {
  if (cfg.blocklist.empty()) return {};
  return net::CidrSet::from_file(cfg.blocklist);
}

std::chrono::microseconds seconds(double s) {
  return std::chrono::microseconds(static_cast<std::int64_t>(s * 1e6));
}

void run_probe_ips(const CampaignConfig& cfg, const CampaignOptions& opts, LineReader& reader, Committer& commit) {
  probe::ScanConfig sc;
  sc.rate = cfg.rate;
  sc.timeout = seconds(cfg.timeout_s);
  sc.retries = cfg.retries;
  sc.shuffle = cfg.shuffle;
  sc.seed = cfg.seed;
  if (!cfg.probe_version.empty()) sc.probe_version = wire::VersionTag::from(cfg.probe_version);
  sc.pad_to = cfg.pad_to;
  sc.max_in_flight = cfg.max_in_flight;
  if (!cfg.bind.empty()) {
    auto a = net::IpAddress::parse(cfg.bind);
    if (!a) fail(Errc::ConfigInvalid, "bad bind address " + cfg.bind);
    (a->is_v4() ? sc.bind_v4 : sc.bind_v6) = net::Endpoint{*a, 0};
  }
  try {
    sc.validate();
  } catch (const Error& e) {
    fail(Errc::ConfigInvalid, e.what());
  }
  auto blocklist = load_blocklist(cfg);

  std::unordered_map<net::Endpoint, std::deque<std::uint64_t>, net::EndpointHash> indices;
  probe::TargetSource source = [&]() -> std::optional<probe::ProbeTarget> {
    while (!stop_requested(opts)) {
      auto job = reader.next();
      if (!job) return std::nullopt;
      auto t = probe::parse_target(job->text, cfg.port);
      if (blocklist.contains(t.address)) {
        commit.commit(job->index, std::nullopt);
        continue;
      }
      indices[t].push_back(job->index);
      return t;
    }
    return std::nullopt;
  };
  auto sink = [&](const probe::ProbeTarget& t, const probe::ProbeOutcome& o) {
    auto it = indices.find(t);
    if (it == indices.end() || it->second.empty()) fail(Errc::InvalidArgument, "result for unknown target");
    auto index = it->second.front();
    it->second.pop_front();
    if (it->second.empty()) indices.erase(it);
    commit.commit(index, probe::outcome_to_jsonl(t, o));
  };
  auto stats = probe::scan_targets(source, sc, sink);
  note(opts, "probe-ips: sent " + std::to_string(stats.sent) + ", capable " + std::to_string(stats.capable) +
                 ", blocklisted " + std::to_string(stats.blocklisted));
}

// Runs `work` over input lines on a thread pool; the first exception wins.
template <typename Work>
void run_pool(unsigned workers, const CampaignOptions& opts, LineReader& reader, Committer& commit, Work work) {
  std::mutex reader_mu;
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto loop = [&] {
    for (;;) {
      if (failed.load() || stop_requested(opts)) return;
      std::optional<LineJob> job;
      {
        std::lock_guard lock(reader_mu);
        try {
          job = reader.next();
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
      if (!job) return;
      try {
        commit.commit(job->index, work(*job));
      } catch (...) {
        std::lock_guard lock(reader_mu);
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned i = 0; i < workers; ++i) threads.emplace_back(loop);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

handshake::HandshakeParams handshake_params(const CampaignConfig& cfg) {
  handshake::HandshakeParams p;
  p.sni = cfg.sni;
  p.version = wire::VersionTag::from(cfg.version);
  p.timeout = seconds(cfg.timeout_s);
  try {
    p.validate();
  } catch (const Error& e) {
    fail(Errc::ConfigInvalid, e.what());
  }
  return p;
}

void run_grab(const CampaignConfig& cfg, const CampaignOptions& opts, LineReader& reader, Committer& commit) {
  auto base = handshake_params(cfg);
  std::optional<handshake::TrustAnchors> anchors;
  if (!cfg.anchors.empty()) anchors = handshake::TrustAnchors::from_file(cfg.anchors);
  auto blocklist = load_blocklist(cfg);
  run_pool(cfg.workers, opts, reader, commit, [&](const LineJob& job) -> std::optional<std::string> {
    auto fields = split(job.text, ' ');
    fields.erase(std::remove(fields.begin(), fields.end(), std::string()), fields.end());
    auto target = probe::parse_target(fields.at(0), cfg.port);
    if (blocklist.contains(target.address)) return std::nullopt;
    auto params = base;
    if (fields.size() > 1) params.sni = fields[1];
    auto r = handshake::perform_handshake(target, params);
    std::optional<handshake::CertVerdict> verdict;
    if (anchors && r.certs && !r.certs->entries.empty())
      verdict = handshake::validate_certificate(*r.certs, params.sni, *anchors, std::chrono::system_clock::now());
    return handshake::handshake_to_jsonl(params.sni, target, params, r, verdict);
  });
}

void write_zone_summary(const CampaignConfig& cfg, CampaignResult& result) {
  domain::ZoneTally tally;
  std::ifstream in(cfg.out);
  std::string line;
  bool header = cfg.format == OutputFormat::Csv;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (trim(line).empty()) continue;
    if (cfg.format == OutputFormat::Jsonl) {
      auto v = domain::verdict_from_jsonl(line);
      tally.add(v.category, v.cert_valid);
    } else {
      auto f = split(line, ',');
      auto c = domain::parse_category(f.at(1));
      if (!c) fail(Errc::MalformedRecord, "bad category in " + cfg.out);
      tally.add(*c, f.at(2) == "true");
    }
  }
  auto path = cfg.summary_out.empty() ? cfg.out + ".summary.csv" : cfg.summary_out;
  write_file_atomic(path, domain::zone_summary_csv(tally.summarize(cfg.zone_size)));
  result.artifacts.push_back(path);
}

void run_scan_domains(const CampaignConfig& cfg, const CampaignOptions& opts, LineReader& reader,
                      Committer& commit) {
  domain::DomainScanConfig dc;
  dc.handshake = handshake_params(cfg);
  dc.port = cfg.port;
  if (cfg.bogons) {
    std::vector<net::Cidr> b;
    for (const auto& s : *cfg.bogons) b.push_back(*net::Cidr::parse(s));
    dc.bogons = net::CidrSet(std::move(b));
  }
  if (!cfg.anchors.empty()) dc.anchors = handshake::TrustAnchors::from_file(cfg.anchors);
  std::unique_ptr<domain::Resolver> resolver;
  if (cfg.resolver == "system") {
    resolver = std::make_unique<domain::SystemResolver>();
  } else {
    resolver = std::make_unique<domain::StaticResolver>(domain::StaticResolver::from_file(cfg.resolver));
  }
  run_pool(cfg.workers, opts, reader, commit, [&](const LineJob& job) -> std::optional<std::string> {
    return domain::verdict_to_jsonl(domain::scan_domain(job.text, *resolver, dc));
  });
}

// ---- single-pass kinds ----

struct TrafficInputs {
  traffic::PrefixMap pm;
  traffic::OperatorMap om;
  traffic::LocalNetwork local;
};

TrafficInputs traffic_inputs(const CampaignConfig& cfg) {
  TrafficInputs t;
  if (!cfg.prefixes.empty()) t.pm = traffic::PrefixMap::from_file(cfg.prefixes);
  if (!cfg.operators.empty()) t.om = traffic::OperatorMap::from_file(cfg.operators);
  std::vector<net::Cidr> local;
  for (const auto& p : cfg.local_prefixes) {
    auto c = net::Cidr::parse(p);
    if (!c) fail(Errc::ConfigInvalid, "bad local prefix " + p);
    local.push_back(*c);
  }
  t.local.prefixes = net::CidrSet(std::move(local));
  t.local.asns.insert(cfg.local_asns.begin(), cfg.local_asns.end());
  return t;
}

bool is_pcap(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint8_t m[4] = {};
  in.read(reinterpret_cast<char*>(m), 4);
  std::uint32_t le = m[0] | m[1] << 8 | m[2] << 16 | static_cast<std::uint32_t>(m[3]) << 24;
  return le == 0xa1b2c3d4 || le == 0xd4c3b2a1 || le == 0xa1b23c4d || le == 0x4d3cb2a1;
}

traffic::ShareReport compute_traffic(const CampaignConfig& cfg, const CampaignOptions& opts) {
  auto in = traffic_inputs(cfg);
  traffic::ShareOptions so;
  so.bin_us = cfg.bin_seconds * 1'000'000;
  so.weight = cfg.weight_packets ? traffic::Weight::Packets : traffic::Weight::Bytes;
  traffic::ShareAccumulator acc(in.pm, in.om, in.local, so);
  auto add = [&](const traffic::FlowRecord& f) { acc.add(f); };
  for (const auto& input : cfg.inputs) {
    if (stop_requested(opts)) fail(Errc::Interrupted, "stopped");
    if (is_pcap(input.path)) {
      auto st = traffic::read_pcap_file(input.path, add);
      note(opts, input.path + ": " + std::to_string(st.flows) + " packets, " + std::to_string(st.skipped) +
                     " skipped");
    } else {
      auto st = traffic::read_flow_csv(input.path, add);
      note(opts, input.path + ": " + std::to_string(st.records) + " flows, " + std::to_string(st.malformed) +
                     " malformed");
    }
  }
  return acc.take();
}

void run_traffic(const CampaignConfig& cfg, const CampaignOptions& opts, CampaignResult& result) {
  auto report = compute_traffic(cfg, opts);
  write_file_atomic(cfg.out, traffic::timeseries_csv(report));
  auto table = cfg.table_out.empty() ? cfg.out + ".table.csv" : cfg.table_out;
  write_file_atomic(table, traffic::share_table_csv(report));
  result.artifacts = {cfg.out, table};
  result.records = report.bins().size();
}

std::vector<std::string> input_paths(const CampaignConfig& cfg) {
  std::vector<std::string> out;
  for (const auto& i : cfg.inputs) out.push_back(i.path);
  return out;
}

std::string attribution_report(const CampaignConfig& cfg) {
  auto in = traffic_inputs(cfg);
  auto rules = cfg.rules.empty() ? report::AttributionRules::defaults() : report::AttributionRules::from_file(cfg.rules);
  std::map<std::string, std::string> rdns;
  if (!cfg.rdns.empty())
    for (const auto& line : read_config_lines(cfg.rdns)) {
      auto f = split(line, ' ');
      if (f.size() >= 2) rdns[f[0]] = f.back();
    }
  struct Cert {
    std::string fingerprint;
    std::string cn;
  };
  std::map<std::string, Cert> certs;
  for (const auto& path : cfg.grabs) {
    std::ifstream g(path);
    if (!g) fail(Errc::IoError, "cannot open " + path);
    std::string line;
    while (std::getline(g, line)) {
      try {
        auto j = nlohmann::json::parse(line);
        auto addr = probe::parse_target(j.at("addr").get<std::string>()).address.to_string();
        auto fps = j.value("cert_fingerprints", nlohmann::json::array());
        if (!fps.empty()) certs.try_emplace(addr, Cert{fps[0].get<std::string>(), j.value("leaf_cn", "")});
      } catch (const std::exception&) {
        continue;
      }
    }
  }
  std::string out;
  std::set<std::string> seen;
  for (const auto& input : cfg.inputs) {
    std::ifstream f(input.path);
    if (!f) fail(Errc::IoError, "cannot open " + input.path);
    std::string line;
    while (std::getline(f, line)) {
      probe::ProbeRecord rec;
      try {
        rec = probe::outcome_from_jsonl(line);
      } catch (const Error&) {
        continue;
      }
      if (!rec.outcome.quic_capable()) continue;
      auto addr = rec.target.address.to_string();
      if (!seen.insert(addr).second) continue;
      report::HostObservation h{rec.target.address, {}, {}, {}, {}};
      if (auto it = rdns.find(addr); it != rdns.end()) h.rdns_name = it->second;
      if (auto it = certs.find(addr); it != certs.end()) {
        h.cert_fingerprint = it->second.fingerprint;
        if (!it->second.cn.empty()) h.cert_names.push_back(it->second.cn);
      }
      out += report::attribution_to_jsonl(report::attribute_host(h, in.pm, in.om, rules)) + "\n";
    }
  }
  return out;
}

void run_report(const CampaignConfig& cfg, const CampaignOptions& opts, CampaignResult& result) {
  std::string body;
  switch (cfg.report) {
    case ReportType::Shares:
      body = traffic::share_table_csv(compute_traffic(cfg, opts));
      break;
    case ReportType::VersionSets: {
      std::vector<report::DatedScan> scans;
      for (const auto& i : cfg.inputs) scans.push_back({i.date, i.path});
      auto s = report::aggregate_version_sets(scans, cfg.set_threshold);
      if (s.malformed) note(opts, "version-sets: skipped " + std::to_string(s.malformed) + " malformed records");
      body = s.to_csv();
      break;
    }
    case ReportType::CertClusters: {
      auto r = report::cluster_certificates(input_paths(cfg));
      note(opts, "cert-clusters: " + std::to_string(r.clusters.size()) + " certificates over " +
                     std::to_string(r.hosts_with_certs) + " hosts");
      body = r.to_csv();
      break;
    }
    case ReportType::ZoneSummary: {
      domain::ZoneTally tally;
      for (const auto& path : input_paths(cfg)) {
        std::ifstream f(path);
        if (!f) fail(Errc::IoError, "cannot open " + path);
        std::string line;
        while (std::getline(f, line)) {
          if (trim(line).empty()) continue;
          auto v = domain::verdict_from_jsonl(line);
          tally.add(v.category, v.cert_valid);
        }
      }
      body = domain::zone_summary_csv(tally.summarize(cfg.zone_size));
      break;
    }
    case ReportType::Attribution:
      body = attribution_report(cfg);
      break;
  }
  write_file_atomic(cfg.out, body);
  result.artifacts = {cfg.out};
}

bool line_oriented(CampaignKind k) {
  return k == CampaignKind::ProbeIps || k == CampaignKind::ScanDomains || k == CampaignKind::Grab;
}

}  // namespace

std::string derive_campaign_id(const CampaignConfig& cfg) {
  auto d = sha256(as_bytes(cfg.snapshot()));
  return std::string(kind_name(cfg.kind)) + "-" + hex_encode(ByteView(d.data(), 6));
}

CampaignResult run_campaign(const std::optional<CampaignConfig>& given, const CampaignOptions& opts) {
  CampaignResult result;
  CampaignConfig cfg;
  std::optional<CampaignState> prior;
  std::string state_dir;

  if (!opts.resume_id.empty()) {
    state_dir = given && !given->state_dir.empty() ? given->state_dir : default_state_dir();
    result.state_path = state_path(state_dir, opts.resume_id);
    prior = CampaignState::load(result.state_path);
    if (!prior) fail(Errc::ConfigInvalid, "no checkpoint for campaign " + opts.resume_id + " in " + state_dir);
    cfg = parse_config(prior->config_snapshot, "");
    bool out_changed = opts.out && std::filesystem::absolute(*opts.out).string() != cfg.out;
    if (out_changed || (opts.format && *opts.format != cfg.format))
      fail(Errc::ConfigInvalid, "--out/--format cannot change on resume");
    if (given && given->kind != cfg.kind)
      fail(Errc::ConfigInvalid, "checkpoint is for a " + prior->kind + " campaign");
    result.id = opts.resume_id;
    result.resumed = true;
  } else {
    if (!given) fail(Errc::ConfigInvalid, "a config is required");
    cfg = *given;
    if (opts.out) cfg.out = std::filesystem::absolute(*opts.out).string();
    if (opts.format) cfg.format = *opts.format;
    if (const char* env = std::getenv("QUIC_RECON_BLOCKLIST"); env && *env)
      cfg.blocklist = std::filesystem::absolute(env).string();
    if (cfg.state_dir.empty()) cfg.state_dir = default_state_dir();
    state_dir = cfg.state_dir;
  }
  if (opts.rate) cfg.rate = *opts.rate;
  if (opts.timeout_s) cfg.timeout_s = *opts.timeout_s;
  cfg.validate();

  if (cfg.kind == CampaignKind::Selftest) {
    std::ostringstream lines;
    int failures = run_selftest(lines, 25);
    if (opts.log) *opts.log << lines.str();
    if (!cfg.out.empty()) {
      write_file_atomic(cfg.out, lines.str());
      result.artifacts.push_back(cfg.out);
    }
    result.exit_status = failures == 0 ? 0 : 1;
    result.summary = failures == 0 ? "selftest: all checks passed" : "selftest: " + std::to_string(failures) + " failed";
    return result;
  }

  if (!result.resumed) {
    result.id = cfg.id.empty() ? derive_campaign_id(cfg) : cfg.id;
    result.state_path = state_path(state_dir, result.id);
  }

  std::vector<std::string> digest_inputs = line_oriented(cfg.kind) ? std::vector<std::string>{cfg.input}
                                                                    : input_paths(cfg);
  CampaignState state;
  state.id = result.id;
  state.kind = kind_name(cfg.kind);
  state.input_digest = digest_of(digest_inputs);
  state.output_path = cfg.out;
  state.config_snapshot = cfg.snapshot();
  if (prior) {
    if (prior->input_digest != state.input_digest)
      fail(Errc::ResumeDigestMismatch, "input changed since checkpoint of " + result.id);
    state.cursor = prior->cursor;
    state.output_offset = prior->output_offset;
    if (prior->complete) {
      result.cursor = prior->cursor;
      result.summary = result.id + ": already complete";
      result.artifacts.push_back(cfg.out);
      return result;
    }
  }

  if (!line_oriented(cfg.kind)) {
    state.save(result.state_path);
    if (cfg.kind == CampaignKind::Traffic) run_traffic(cfg, opts, result);
    else run_report(cfg, opts, result);
    state.cursor = cfg.inputs.size();
    state.complete = true;
    state.save(result.state_path);
    result.cursor = state.cursor;
    result.summary = result.id + ": wrote " + cfg.out;
    return result;
  }

  Committer commit(cfg, opts, state, result.state_path, result.resumed);
  LineReader reader(cfg.input);
  reader.skip(state.cursor);
  note(opts, std::string(result.resumed ? "resuming " : "starting ") + result.id + " at record " +
                 std::to_string(state.cursor));
  switch (cfg.kind) {
    case CampaignKind::ProbeIps: run_probe_ips(cfg, opts, reader, commit); break;
    case CampaignKind::Grab: run_grab(cfg, opts, reader, commit); break;
    case CampaignKind::ScanDomains: run_scan_domains(cfg, opts, reader, commit); break;
    default: break;
  }
  result.interrupted = stop_requested(opts);
  commit.checkpoint(!result.interrupted);
  result.records = commit.written();
  result.cursor = commit.watermark();
  result.artifacts.push_back(cfg.out);
  if (result.interrupted) {
    result.exit_status = 130;
    result.summary = result.id + ": stopped at record " + std::to_string(result.cursor) + "; resume with --resume " +
                     result.id;
    return result;
  }
  if (cfg.kind == CampaignKind::ScanDomains) write_zone_summary(cfg, result);
  result.summary = result.id + ": " + std::to_string(result.cursor) + " records complete";
  return result;
}

}  // namespace qr::campaign
