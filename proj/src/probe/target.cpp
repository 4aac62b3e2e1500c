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

#include "probe/target.hpp"

#include <charconv>
#include <memory>

#include "common/error.hpp"
#include "common/text.hpp"

namespace qr::probe {

namespace {

std::uint16_t parse_port(std::string_view s) {
  unsigned v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || v == 0 || v > 65535)
    fail(Errc::ParseError, "bad port '" + std::string(s) + "'");
  return static_cast<std::uint16_t>(v);
}

net::IpAddress parse_addr(std::string_view s) {
  auto a = net::IpAddress::parse(s);
  if (!a) fail(Errc::ParseError, "bad address '" + std::string(s) + "'");
  return *a;
}

}  // namespace

ProbeTarget parse_target(std::string_view text, std::uint16_t default_port) {
  if (default_port == 0) fail(Errc::InvalidArgument, "port 0");
  std::string t(trim(text));
  std::string_view s = t;
  if (s.starts_with('[')) {
    auto close = s.find(']');
    if (close == std::string_view::npos) fail(Errc::ParseError, "unterminated '[' in '" + t + "'");
    auto addr = parse_addr(s.substr(1, close - 1));
    auto rest = s.substr(close + 1);
    if (rest.empty()) return {addr, default_port};
    if (rest.front() != ':') fail(Errc::ParseError, "junk after ']' in '" + t + "'");
    return {addr, parse_port(rest.substr(1))};
  }
  auto colon = s.find(':');
  if (colon != std::string_view::npos && s.find(':', colon + 1) == std::string_view::npos)
    return {parse_addr(s.substr(0, colon)), parse_port(s.substr(colon + 1))};
  return {parse_addr(s), default_port};
}

TargetSource vector_source(std::vector<ProbeTarget> targets) {
  auto shared = std::make_shared<std::vector<ProbeTarget>>(std::move(targets));
  auto pos = std::make_shared<std::size_t>(0);
  return [shared, pos]() -> std::optional<ProbeTarget> {
    if (*pos >= shared->size()) return std::nullopt;
    return (*shared)[(*pos)++];
  };
}

TargetFile::TargetFile(const std::string& path, std::uint16_t default_port)
    : in_(path), path_(path), default_port_(default_port) {
  if (!in_) fail(Errc::IoError, "cannot open " + path);
}

std::optional<std::pair<std::uint64_t, ProbeTarget>> TargetFile::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto t = trim(line);
    if (t.empty()) continue;
    try {
      return std::make_pair(index_++, parse_target(t, default_port_));
    } catch (const Error& e) {
      fail(Errc::ParseError, path_ + ":" + std::to_string(line_no_) + ": " + e.what());
    }
  }
  return std::nullopt;
}

TargetSource TargetFile::source() {
  return [this]() -> std::optional<ProbeTarget> {
    auto n = next();
    if (!n) return std::nullopt;
    return n->second;
  };
}

}  // namespace qr::probe
