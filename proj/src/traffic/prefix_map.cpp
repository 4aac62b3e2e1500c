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

#include "traffic/prefix_map.hpp"

#include <charconv>

#include "common/error.hpp"
#include "common/text.hpp"

namespace qr::traffic {

namespace {

std::optional<std::uint32_t> parse_asn(std::string_view s) {
  s = trim(s);
  if (s.size() > 2 && (s[0] == 'A' || s[0] == 'a') && (s[1] == 'S' || s[1] == 's')) s.remove_prefix(2);
  std::uint32_t v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || s.empty()) return std::nullopt;
  return v;
}

std::vector<std::string> fields_of(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

PrefixMap::PrefixMap() : v4_(1), v6_(1) {}

void PrefixMap::add(const net::Cidr& prefix, std::uint32_t asn) {
  auto& t = trie(prefix.base().family());
  std::uint32_t n = 0;
  for (int i = 0; i < prefix.prefix_len(); ++i) {
    int b = prefix.base().bit(i);
    if (t[n].child[b] == 0) {
      t[n].child[b] = static_cast<std::uint32_t>(t.size());
      t.emplace_back();
    }
    n = t[n].child[b];
  }
  if (!t[n].has_value) ++size_;
  t[n].has_value = true;
  t[n].asn = asn;
}

std::optional<std::uint32_t> PrefixMap::lookup(const net::IpAddress& addr) const {
  const auto& t = trie(addr.family());
  int bits = addr.is_v4() ? 32 : 128;
  std::optional<std::uint32_t> best;
  std::uint32_t n = 0;
  for (int i = 0;; ++i) {
    if (t[n].has_value) best = t[n].asn;
    if (i == bits) break;
    std::uint32_t next = t[n].child[addr.bit(i)];
    if (next == 0) break;
    n = next;
  }
  return best;
}

PrefixMap PrefixMap::parse(std::string_view text) {
  PrefixMap m;
  int lineno = 0;
  for (const auto& line : config_lines(text)) {
    ++lineno;
    auto f = fields_of(line);
    if (lineno == 1 && !f.empty() && to_lower(f[0]) == "prefix") continue;  // CSV header
    std::optional<net::Cidr> cidr;
    std::string asn_field;
    if (f.size() == 2) {
      cidr = net::Cidr::parse(f[0]);
      asn_field = f[1];
    } else if (f.size() == 3) {
      cidr = net::Cidr::parse(f[0] + "/" + f[1]);
      asn_field = f[2];
    }
    auto cut = asn_field.find_first_of("_,");
    auto asn = parse_asn(std::string_view(asn_field).substr(0, cut));
    if (!cidr || !asn) fail(Errc::ConfigInvalid, "prefix map line " + std::to_string(lineno) + ": '" + line + "'");
    m.add(*cidr, *asn);
  }
  return m;
}

PrefixMap PrefixMap::from_file(const std::string& path) { return parse(read_file(path)); }

void OperatorMap::add(const std::string& name, const std::vector<std::uint32_t>& asns) {
  if (name.empty() || name == kOtherOperator) fail(Errc::ConfigInvalid, "invalid operator name '" + name + "'");
  for (auto a : asns) {
    auto it = by_asn_.find(a);
    if (it != by_asn_.end() && it->second != name)
      fail(Errc::ConfigInvalid, "AS" + std::to_string(a) + " assigned to both " + it->second + " and " + name);
  }
  for (auto a : asns) by_asn_[a] = name;
  names_.insert(name);
}

const std::string& OperatorMap::operator_of(std::uint32_t asn) const {
  auto it = by_asn_.find(asn);
  return it == by_asn_.end() ? kOtherOperator : it->second;
}

std::vector<std::string> OperatorMap::names() const { return {names_.begin(), names_.end()}; }

OperatorMap OperatorMap::parse(std::string_view text) {
  OperatorMap m;
  for (const auto& line : config_lines(text)) {
    auto colon = line.find(':');
    if (colon == std::string::npos) fail(Errc::ConfigInvalid, "operator line without ':': '" + line + "'");
    std::string name = to_lower(trim(std::string_view(line).substr(0, colon)));
    std::vector<std::uint32_t> asns;
    for (const auto& tok : fields_of(std::string_view(line).substr(colon + 1))) {
      auto a = parse_asn(tok);
      if (!a) fail(Errc::ConfigInvalid, "bad ASN '" + tok + "' for " + name);
      asns.push_back(*a);
    }
    m.add(name, asns);
  }
  return m;
}

OperatorMap OperatorMap::from_file(const std::string& path) { return parse(read_file(path)); }

}  // namespace qr::traffic
