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

#include "mock/profile.hpp"

#include <filesystem>
#include <sstream>

#include "common/text.hpp"
#include "handshake/certificates.hpp"
#include "mock/test_certificate.hpp"

namespace qr::mock {

const char* behavior_name(Behavior b) {
  switch (b) {
    case Behavior::Negotiate: return "negotiate";
    case Behavior::Reset: return "reset";
    case Behavior::Silent: return "silent";
    case Behavior::Malformed: return "malformed";
    case Behavior::ServeRej: return "serve_rej";
  }
  return "unknown";
}

std::optional<Behavior> parse_behavior(std::string_view text) {
  auto t = to_lower(trim(text));
  for (auto b : {Behavior::Negotiate, Behavior::Reset, Behavior::Silent, Behavior::Malformed, Behavior::ServeRej})
    if (t == behavior_name(b)) return b;
  if (t == "servrej" || t == "serverej" || t == "rej") return Behavior::ServeRej;
  return std::nullopt;
}

void ResponderProfile::validate() const {
  if (behavior == Behavior::ServeRej && !scfg) fail(Errc::ConfigInvalid, "profile '" + name + "': serve_rej needs an scfg");
  if (!(drop_probability >= 0.0 && drop_probability <= 1.0))
    fail(Errc::ConfigInvalid, "profile '" + name + "': drop_probability outside [0,1]");
  if (supported_versions.empty() && (behavior == Behavior::Negotiate || behavior == Behavior::ServeRej))
    fail(Errc::ConfigInvalid, "profile '" + name + "': no supported versions");
  if (cid_range && cid_range->first > cid_range->second)
    fail(Errc::ConfigInvalid, "profile '" + name + "': empty cid_range");
  if (scfg) {
    try {
      wire::encode_server_config(*scfg);
    } catch (const Error& e) {
      fail(Errc::ConfigInvalid, "profile '" + name + "': " + e.what());
    }
  }
}

const wire::CertificateChain* ResponderProfile::chain_for(std::string_view sni) const {
  if (!sni.empty()) {
    auto it = cert_inventory.find(to_lower(sni));
    if (it != cert_inventory.end()) return &it->second;
  }
  if (sni_required) return nullptr;
  auto star = cert_inventory.find("*");
  if (star != cert_inventory.end()) return &star->second;
  if (!cert_inventory.empty()) return &cert_inventory.begin()->second;
  return nullptr;
}

namespace {

bool parse_bool(const std::string& key, std::string_view v) {
  auto t = to_lower(trim(v));
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  fail(Errc::ConfigInvalid, key + ": expected a boolean");
}

std::uint64_t parse_u64(const std::string& key, std::string_view v, int base = 10) {
  std::string s(trim(v));
  try {
    std::size_t used = 0;
    auto n = std::stoull(s, &used, base);
    if (used != s.size()) throw std::invalid_argument(s);
    return n;
  } catch (const std::exception&) {
    fail(Errc::ConfigInvalid, key + ": expected an integer, got '" + s + "'");
  }
}

std::vector<std::string> parse_list(std::string_view v) {
  std::vector<std::string> out;
  for (auto& item : split(v, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

Bytes parse_hex(const std::string& key, std::string_view v) {
  try {
    return hex_decode(trim(v));
  } catch (const Error&) {
    fail(Errc::ConfigInvalid, key + ": invalid hex");
  }
}

struct ScfgDraft {
  std::optional<std::array<std::uint8_t, 16>> scid;
  std::vector<wire::Tag> kexs, aead;
  std::vector<Bytes> pubs;
  std::uint64_t expy = 0;
  std::optional<std::vector<wire::VersionTag>> vers;
  bool touched = false;
};

wire::VersionTag parse_version(const std::string& key, const std::string& v) {
  try {
    return wire::VersionTag::from(v);
  } catch (const Error&) {
    fail(Errc::ConfigInvalid, key + ": bad version tag '" + v + "'");
  }
}

void finish(ResponderProfile& p, ScfgDraft& d) {
  if (d.touched || p.behavior == Behavior::ServeRej || !p.cert_inventory.empty()) {
    wire::ServerConfig c;
    if (d.scid) {
      c.scid = *d.scid;
    } else {
      auto digest = sha256(to_bytes(p.name));
      std::copy_n(digest.begin(), 16, c.scid.begin());
    }
    c.kexs = d.kexs.empty() ? std::vector<wire::Tag>{wire::Tag::from("C255")} : d.kexs;
    c.aead = d.aead.empty() ? std::vector<wire::Tag>{wire::Tag::from("AESG")} : d.aead;
    c.pubs = d.pubs;
    if (c.pubs.empty())
      for (std::size_t i = 0; i < c.kexs.size(); ++i) c.pubs.push_back(Bytes(32, static_cast<std::uint8_t>(0x40 + i)));
    c.expy = d.expy ? d.expy : 4102444800ull;  // 2100-01-01
    c.vers = d.vers ? *d.vers : p.supported_versions;
    p.scfg = c;
  }
  p.validate();
}

}  // namespace

std::vector<ResponderProfile> parse_profiles(std::string_view text, const std::string& base_dir) {
  std::vector<ResponderProfile> out;
  ResponderProfile cur;
  ScfgDraft draft;
  bool have_settings = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(Errc::ConfigInvalid, "line " + std::to_string(line_no) + ": unterminated section");
      auto inner = trim(line.substr(1, line.size() - 2));
      if (!inner.starts_with("profile")) fail(Errc::ConfigInvalid, "line " + std::to_string(line_no) + ": unknown section");
      if (have_settings || !out.empty() || cur.name != "default") {
        finish(cur, draft);
        out.push_back(std::move(cur));
      }
      cur = ResponderProfile{};
      draft = ScfgDraft{};
      cur.name = std::string(trim(inner.substr(7)));
      if (cur.name.empty()) cur.name = "profile" + std::to_string(out.size());
      have_settings = true;
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(Errc::ConfigInvalid, "line " + std::to_string(line_no) + ": expected key = value");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    have_settings = true;

    if (key == "behavior") {
      auto b = parse_behavior(value);
      if (!b) fail(Errc::ConfigInvalid, "unknown behavior '" + value + "'");
      cur.behavior = *b;
    } else if (key == "versions") {
      cur.supported_versions.clear();
      for (const auto& v : parse_list(value)) cur.supported_versions.push_back(parse_version(key, v));
    } else if (key == "sni_required") {
      cur.sni_required = parse_bool(key, value);
    } else if (key == "reply_delay_ms") {
      cur.reply_delay = std::chrono::milliseconds(parse_u64(key, value));
    } else if (key == "drop_probability") {
      try {
        cur.drop_probability = std::stod(value);
      } catch (const std::exception&) {
        fail(Errc::ConfigInvalid, "drop_probability: not a number");
      }
    } else if (key == "cid_range") {
      auto dash = value.find('-');
      if (dash == std::string::npos) fail(Errc::ConfigInvalid, "cid_range: expected LO-HI in hex");
      cur.cid_range = std::pair{parse_u64(key, value.substr(0, dash), 16), parse_u64(key, value.substr(dash + 1), 16)};
    } else if (key == "stk") {
      cur.source_token = parse_hex(key, value);
    } else if (key == "require_stk") {
      cur.require_stk = parse_bool(key, value);
    } else if (key == "crt_encoding") {
      if (value == "zlib") cur.crt_encoding = wire::CertEncoding::Zlib;
      else if (value == "raw") cur.crt_encoding = wire::CertEncoding::Raw;
      else fail(Errc::ConfigInvalid, "crt_encoding: expected zlib or raw");
    } else if (key == "malformed_hex") {
      cur.malformed_payload = parse_hex(key, value);
    } else if (key == "seed") {
      cur.seed = parse_u64(key, value);
    } else if (key.starts_with("scfg.")) {
      draft.touched = true;
      auto field = key.substr(5);
      if (field == "scid") {
        auto b = parse_hex(key, value);
        if (b.size() != 16) fail(Errc::ConfigInvalid, "scfg.scid must be 16 octets");
        std::array<std::uint8_t, 16> a{};
        std::copy(b.begin(), b.end(), a.begin());
        draft.scid = a;
      } else if (field == "kexs" || field == "aead") {
        std::vector<wire::Tag> tags;
        for (const auto& t : parse_list(value)) tags.push_back(wire::Tag::from(t));
        (field == "kexs" ? draft.kexs : draft.aead) = tags;
      } else if (field == "pubs") {
        draft.pubs.clear();
        for (const auto& h : parse_list(value)) draft.pubs.push_back(parse_hex(key, h));
      } else if (field == "expy") {
        draft.expy = parse_u64(key, value);
      } else if (field == "vers") {
        std::vector<wire::VersionTag> vers;
        for (const auto& v : parse_list(value)) vers.push_back(parse_version(key, v));
        draft.vers = vers;
      } else if (field != "enabled") {
        fail(Errc::ConfigInvalid, "unknown key " + key);
      }
    } else if (key.starts_with("cert.")) {
      auto host = to_lower(key.substr(5));
      wire::CertificateChain chain;
      if (value == "@selfsigned") {
        chain.entries.push_back(issue_self_signed(host == "*" ? "default.invalid" : host).der);
      } else {
        std::filesystem::path p(value);
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        try {
          chain.entries = handshake::load_certificates(read_file(p.string()));
        } catch (const Error& e) {
          fail(Errc::ConfigInvalid, key + ": " + e.what());
        }
      }
      cur.cert_inventory[host] = std::move(chain);
    } else {
      fail(Errc::ConfigInvalid, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  finish(cur, draft);
  out.push_back(std::move(cur));
  return out;
}

std::vector<ResponderProfile> load_profiles(const std::string& path) {
  auto dir = std::filesystem::path(path).parent_path().string();
  return parse_profiles(read_file(path), dir.empty() ? "." : dir);
}

}  // namespace qr::mock
