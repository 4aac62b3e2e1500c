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

#include "domain/alt_svc.hpp"

#include <charconv>
#include <cstdio>

#include "common/text.hpp"

namespace qr::domain {

namespace {

// Splits on `sep` outside double quotes.
std::vector<std::string_view> split_unquoted(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  bool quoted = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && quoted) {
      ++i;
    } else if (s[i] == '"') {
      quoted = !quoted;
    } else if (s[i] == sep && !quoted) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

std::optional<std::string> unquote(std::string_view v) {
  v = trim(v);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) ++i;
      out += v[i];
    }
    return out;
  }
  if (v.find('"') != std::string_view::npos) return std::nullopt;
  return std::string(v);
}

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      unsigned v = 0;
      auto r = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
      if (r.ec == std::errc{} && r.ptr == s.data() + i + 3) {
        out += static_cast<char>(v);
        i += 2;
        continue;
      }
    }
    out += s[i];
  }
  return out;
}

template <typename T>
std::optional<T> to_number(std::string_view s) {
  T v{};
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<AltSvcEntry> parse_alternative(std::string_view alt) {
  auto parts = split_unquoted(alt, ';');
  auto head = trim(parts[0]);
  auto eq = head.find('=');
  if (eq == std::string_view::npos) return std::nullopt;
  AltSvcEntry e;
  e.protocol_id = percent_decode(trim(head.substr(0, eq)));
  if (e.protocol_id.empty()) return std::nullopt;
  auto authority = unquote(head.substr(eq + 1));
  if (!authority) return std::nullopt;
  auto colon = authority->rfind(':');
  if (colon == std::string::npos) return std::nullopt;
  e.host = authority->substr(0, colon);
  if (e.host.size() >= 2 && e.host.front() == '[' && e.host.back() == ']') e.host = e.host.substr(1, e.host.size() - 2);
  auto port = to_number<unsigned>(std::string_view(*authority).substr(colon + 1));
  if (!port || *port == 0 || *port > 65535) return std::nullopt;
  e.port = static_cast<std::uint16_t>(*port);

  for (std::size_t i = 1; i < parts.size(); ++i) {
    auto p = trim(parts[i]);
    if (p.empty()) continue;
    auto peq = p.find('=');
    if (peq == std::string_view::npos) continue;
    auto name = to_lower(trim(p.substr(0, peq)));
    auto value = unquote(p.substr(peq + 1));
    if (!value) continue;
    if (name == "ma") {
      e.max_age = to_number<std::uint64_t>(*value);
    } else if (name == "v") {
      for (const auto& v : split(*value, ',')) {
        auto t = trim(v);
        if (!t.empty()) e.versions.emplace_back(t);
      }
    }
  }
  return e;
}

}  // namespace

std::vector<AltSvcEntry> parse_alt_svc(std::string_view value, bool* clear) {
  std::vector<AltSvcEntry> out;
  if (clear) *clear = false;
  if (iequals(trim(value), "clear")) {
    if (clear) *clear = true;
    return out;
  }
  for (auto alt : split_unquoted(value, ',')) {
    if (trim(alt).empty()) continue;
    if (auto e = parse_alternative(alt)) out.push_back(std::move(*e));
  }
  return out;
}

bool requires_version(const AltSvcAdvertisement& adv, int version) {
  auto plain = std::to_string(version);
  char tag[8];
  std::snprintf(tag, sizeof tag, "Q%03d", version);
  for (const auto& e : adv.protocols) {
    if (e.protocol_id != "quic") continue;
    for (const auto& v : e.versions)
      if (v == plain || v == tag) return true;
  }
  return false;
}

AltSvcAdvertisement check_alt_svc(const HttpRequest& req) {
  auto res = http_get(req);
  AltSvcAdvertisement adv;
  adv.source = req.https ? AltSvcSource::Https : AltSvcSource::Http;
  for (const auto& value : res.header_values("alt-svc")) {
    bool clear = false;
    auto entries = parse_alt_svc(value, &clear);
    adv.clear = adv.clear || clear;
    adv.protocols.insert(adv.protocols.end(), entries.begin(), entries.end());
  }
  return adv;
}

AltSvcAdvertisement check_alt_svc(const std::string& name, std::uint16_t port) {
  HttpRequest req;
  req.host = name;
  req.port = port;
  req.https = port == 443;
  return check_alt_svc(req);
}

}  // namespace qr::domain
