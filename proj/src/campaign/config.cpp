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

#include "campaign/config.hpp"

#include <filesystem>
#include <functional>
#include <map>

#include "common/error.hpp"
#include "common/text.hpp"
#include "json.hpp"
#include "net/address.hpp"

namespace qr::campaign {

namespace {

using nlohmann::ordered_json;

template <typename E, std::size_t N>
std::optional<E> lookup(const std::pair<const char*, E> (&table)[N], std::string_view s) {
  for (const auto& [name, e] : table)
    if (s == name) return e;
  return std::nullopt;
}

template <typename E, std::size_t N>
const char* name_of(const std::pair<const char*, E> (&table)[N], E e) {
  for (const auto& [name, v] : table)
    if (v == e) return name;
  return "?";
}

constexpr std::pair<const char*, CampaignKind> kKinds[] = {
    {"probe-ips", CampaignKind::ProbeIps}, {"scan-domains", CampaignKind::ScanDomains},
    {"grab", CampaignKind::Grab},          {"traffic", CampaignKind::Traffic},
    {"report", CampaignKind::Report},      {"selftest", CampaignKind::Selftest}};
constexpr std::pair<const char*, OutputFormat> kFormats[] = {{"jsonl", OutputFormat::Jsonl},
                                                             {"csv", OutputFormat::Csv}};
constexpr std::pair<const char*, ReportType> kReports[] = {
    {"shares", ReportType::Shares},
    {"version-sets", ReportType::VersionSets},
    {"cert-clusters", ReportType::CertClusters},
    {"zone-summary", ReportType::ZoneSummary},
    {"attribution", ReportType::Attribution}};

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || base.empty()) return p;
  std::filesystem::path path(p);
  if (path.is_absolute()) return p;
  return (std::filesystem::path(base) / path).lexically_normal().string();
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  fail(Errc::ConfigInvalid, "config key '" + key + "': " + why);
}

}  // namespace

const char* kind_name(CampaignKind k) { return name_of(kKinds, k); }
std::optional<CampaignKind> parse_kind(std::string_view s) { return lookup(kKinds, s); }
const char* format_name(OutputFormat f) { return name_of(kFormats, f); }
std::optional<OutputFormat> parse_format(std::string_view s) { return lookup(kFormats, s); }
const char* report_name(ReportType r) { return name_of(kReports, r); }
std::optional<ReportType> parse_report(std::string_view s) { return lookup(kReports, s); }

CampaignConfig parse_config(std::string_view json_text, const std::string& base_dir,
                            std::optional<CampaignKind> expected) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(Errc::ConfigInvalid, "config must be a JSON object");

  CampaignConfig c;
  auto str = [&](const std::string& k, const ordered_json& v) {
    if (!v.is_string()) bad(k, "expected a string");
    return v.get<std::string>();
  };
  auto path = [&](const std::string& k, const ordered_json& v) { return resolve(base_dir, str(k, v)); };
  auto uint = [&](const std::string& k, const ordered_json& v) {
    if (!v.is_number_unsigned()) bad(k, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  };
  auto num = [&](const std::string& k, const ordered_json& v) {
    if (!v.is_number()) bad(k, "expected a number");
    return v.get<double>();
  };
  auto boolean = [&](const std::string& k, const ordered_json& v) {
    if (!v.is_boolean()) bad(k, "expected true or false");
    return v.get<bool>();
  };
  auto str_list = [&](const std::string& k, const ordered_json& v, bool is_path) {
    std::vector<std::string> out;
    if (v.is_string()) {
      out.push_back(is_path ? path(k, v) : str(k, v));
      return out;
    }
    if (!v.is_array()) bad(k, "expected a string or an array of strings");
    for (const auto& e : v) out.push_back(is_path ? path(k, e) : str(k, e));
    return out;
  };

  using Handler = std::function<void(const std::string&, const ordered_json&)>;
  const std::map<std::string, Handler> handlers = {
      {"kind",
       [&](auto& k, auto& v) {
         auto kind = parse_kind(str(k, v));
         if (!kind) bad(k, "unknown campaign kind");
         c.kind = *kind;
       }},
      {"id", [&](auto& k, auto& v) { c.id = str(k, v); }},
      {"out", [&](auto& k, auto& v) { c.out = path(k, v); }},
      {"format",
       [&](auto& k, auto& v) {
         auto f = parse_format(str(k, v));
         if (!f) bad(k, "expected jsonl or csv");
         c.format = *f;
       }},
      {"state_dir", [&](auto& k, auto& v) { c.state_dir = path(k, v); }},
      {"checkpoint_every", [&](auto& k, auto& v) { c.checkpoint_every = uint(k, v); }},
      {"checkpoint_seconds", [&](auto& k, auto& v) { c.checkpoint_seconds = num(k, v); }},
      {"input", [&](auto& k, auto& v) { c.input = path(k, v); }},
      {"port",
       [&](auto& k, auto& v) {
         auto p = uint(k, v);
         if (p == 0 || p > 65535) bad(k, "port out of range");
         c.port = static_cast<std::uint16_t>(p);
       }},
      {"rate", [&](auto& k, auto& v) { c.rate = num(k, v); }},
      {"timeout", [&](auto& k, auto& v) { c.timeout_s = num(k, v); }},
      {"retries", [&](auto& k, auto& v) { c.retries = static_cast<unsigned>(uint(k, v)); }},
      {"blocklist", [&](auto& k, auto& v) { c.blocklist = path(k, v); }},
      {"shuffle", [&](auto& k, auto& v) { c.shuffle = boolean(k, v); }},
      {"seed", [&](auto& k, auto& v) { c.seed = uint(k, v); }},
      {"probe_version", [&](auto& k, auto& v) { c.probe_version = str(k, v); }},
      {"pad_to", [&](auto& k, auto& v) { c.pad_to = uint(k, v); }},
      {"max_in_flight", [&](auto& k, auto& v) { c.max_in_flight = uint(k, v); }},
      {"bind", [&](auto& k, auto& v) { c.bind = str(k, v); }},
      {"sni", [&](auto& k, auto& v) { c.sni = str(k, v); }},
      {"version", [&](auto& k, auto& v) { c.version = str(k, v); }},
      {"workers", [&](auto& k, auto& v) { c.workers = static_cast<unsigned>(uint(k, v)); }},
      {"resolver",
       [&](auto& k, auto& v) {
         auto r = str(k, v);
         c.resolver = r == "system" ? r : resolve(base_dir, r);
       }},
      {"anchors", [&](auto& k, auto& v) { c.anchors = path(k, v); }},
      {"bogons", [&](auto& k, auto& v) { c.bogons = str_list(k, v, false); }},
      {"zone_size", [&](auto& k, auto& v) { c.zone_size = uint(k, v); }},
      {"summary_out", [&](auto& k, auto& v) { c.summary_out = path(k, v); }},
      {"inputs",
       [&](auto& k, auto& v) {
         if (!v.is_array()) bad(k, "expected an array");
         for (const auto& e : v) {
           if (e.is_string()) {
             c.inputs.push_back({path(k, e), ""});
           } else if (e.is_object() && e.contains("path")) {
             DatedInput d{path(k, e.at("path")), e.contains("date") ? str(k, e.at("date")) : ""};
             c.inputs.push_back(std::move(d));
           } else {
             bad(k, "entries are paths or {\"path\", \"date\"} objects");
           }
         }
       }},
      {"prefixes", [&](auto& k, auto& v) { c.prefixes = path(k, v); }},
      {"operators", [&](auto& k, auto& v) { c.operators = path(k, v); }},
      {"local_prefixes", [&](auto& k, auto& v) { c.local_prefixes = str_list(k, v, false); }},
      {"local_asns",
       [&](auto& k, auto& v) {
         if (!v.is_array()) bad(k, "expected an array of ASNs");
         for (const auto& e : v) c.local_asns.push_back(static_cast<std::uint32_t>(uint(k, e)));
       }},
      {"bin_seconds", [&](auto& k, auto& v) { c.bin_seconds = static_cast<std::int64_t>(uint(k, v)); }},
      {"weight",
       [&](auto& k, auto& v) {
         auto w = str(k, v);
         if (w != "bytes" && w != "packets") bad(k, "expected bytes or packets");
         c.weight_packets = w == "packets";
       }},
      {"table_out", [&](auto& k, auto& v) { c.table_out = path(k, v); }},
      {"report",
       [&](auto& k, auto& v) {
         auto r = parse_report(str(k, v));
         if (!r) bad(k, "unknown report type");
         c.report = *r;
       }},
      {"set_threshold", [&](auto& k, auto& v) { c.set_threshold = uint(k, v); }},
      {"grabs", [&](auto& k, auto& v) { c.grabs = str_list(k, v, true); }},
      {"rdns", [&](auto& k, auto& v) { c.rdns = path(k, v); }},
      {"rules", [&](auto& k, auto& v) { c.rules = path(k, v); }},
  };
  for (const auto& [key, value] : j.items()) {
    auto h = handlers.find(key);
    if (h == handlers.end()) fail(Errc::ConfigInvalid, "unknown config key '" + key + "'");
    h->second(key, value);
  }
  if (expected) {
    if (j.contains("kind") && c.kind != *expected)
      fail(Errc::ConfigInvalid, std::string("config is for '") + kind_name(c.kind) + "', not '" +
                                    kind_name(*expected) + "'");
    c.kind = *expected;
  }
  return c;
}

CampaignConfig load_config(const std::string& path, std::optional<CampaignKind> expected) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    fail(Errc::ConfigInvalid, "cannot read config " + path);
  }
  auto base = std::filesystem::absolute(path).parent_path().string();
  return parse_config(text, base, expected);
}

void CampaignConfig::validate() const {
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) fail(Errc::ConfigInvalid, std::string(kind_name(kind)) + ": " + what);
  };
  need(!(rate <= 0.0) && rate <= 1e7, "rate must be in (0, 1e7]");
  need(timeout_s > 0.0 && timeout_s <= 3600.0, "timeout must be in (0, 3600] seconds");
  need(checkpoint_every > 0, "checkpoint_every must be positive");
  need(workers > 0 && workers <= 4096, "workers must be in [1, 4096]");
  need(bin_seconds > 0, "bin_seconds must be positive");
  if (bogons)
    for (const auto& b : *bogons) need(net::Cidr::parse(b).has_value(), "bad bogon prefix " + b);
  switch (kind) {
    case CampaignKind::ProbeIps:
    case CampaignKind::Grab:
    case CampaignKind::ScanDomains:
      need(!input.empty(), "'input' is required");
      need(!out.empty(), "'out' is required");
      break;
    case CampaignKind::Traffic:
      need(!inputs.empty(), "'inputs' is required");
      need(!out.empty(), "'out' is required");
      need(format == OutputFormat::Csv, "traffic output is CSV only");
      break;
    case CampaignKind::Report:
      need(!inputs.empty(), "'inputs' is required");
      need(!out.empty(), "'out' is required");
      need(report == ReportType::Attribution ? format == OutputFormat::Jsonl : format == OutputFormat::Csv,
           std::string("report ") + report_name(report) + " does not support format " + format_name(format));
      break;
    case CampaignKind::Selftest:
      break;
  }
}

std::string CampaignConfig::snapshot() const {
  ordered_json j;
  j["kind"] = kind_name(kind);
  j["out"] = out;
  j["format"] = format_name(format);
  j["state_dir"] = state_dir;
  j["checkpoint_every"] = checkpoint_every;
  j["checkpoint_seconds"] = checkpoint_seconds;
  j["input"] = input;
  j["port"] = port;
  j["rate"] = rate;
  j["timeout"] = timeout_s;
  j["retries"] = retries;
  j["blocklist"] = blocklist;
  j["shuffle"] = shuffle;
  j["seed"] = seed;
  j["probe_version"] = probe_version;
  j["pad_to"] = pad_to;
  j["max_in_flight"] = max_in_flight;
  j["bind"] = bind;
  j["sni"] = sni;
  j["version"] = version;
  j["workers"] = workers;
  j["resolver"] = resolver;
  j["anchors"] = anchors;
  if (bogons) j["bogons"] = *bogons;
  if (zone_size) j["zone_size"] = *zone_size;
  j["summary_out"] = summary_out;
  auto& in = j["inputs"] = ordered_json::array();
  for (const auto& d : inputs) in.push_back(ordered_json{{"path", d.path}, {"date", d.date}});
  j["prefixes"] = prefixes;
  j["operators"] = operators;
  j["local_prefixes"] = local_prefixes;
  j["local_asns"] = local_asns;
  j["bin_seconds"] = bin_seconds;
  j["weight"] = weight_packets ? "packets" : "bytes";
  j["table_out"] = table_out;
  j["report"] = report_name(report);
  j["set_threshold"] = set_threshold;
  j["grabs"] = grabs;
  j["rdns"] = rdns;
  j["rules"] = rules;
  return j.dump();
}

}  // namespace qr::campaign
