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

#include "domain/resolver.hpp"

#include <netdb.h>
#include <sys/socket.h>

#include <algorithm>
#include <memory>

#include "common/error.hpp"
#include "common/text.hpp"

namespace qr::domain {

const char* resolution_name(Resolution r) {
  switch (r) {
    case Resolution::Ok: return "ok";
    case Resolution::NxDomain: return "nxdomain";
    case Resolution::ServFail: return "servfail";
    case Resolution::Timeout: return "timeout";
  }
  return "unknown";
}

std::string normalize_name(std::string_view name) {
  std::string n = to_lower(trim(name));
  if (!n.empty() && n.back() == '.') n.pop_back();
  if (n.empty() || n.size() > 253) qr::fail(Errc::InvalidArgument, "bad domain name '" + std::string(name) + "'");
  for (auto label : split(n, '.')) {
    if (label.empty() || label.size() > 63) qr::fail(Errc::InvalidArgument, "bad domain name '" + n + "'");
    for (char c : label)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'))
        qr::fail(Errc::InvalidArgument, "bad domain name '" + n + "'");
  }
  return n;
}

DomainRecord SystemResolver::resolve(const std::string& name) {
  DomainRecord rec;
  rec.name = name;
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_DGRAM;
  addrinfo* res = nullptr;
  int rc = ::getaddrinfo(name.c_str(), nullptr, &hints, &res);
  if (rc != 0) {
    switch (rc) {
      case EAI_NONAME:
#ifdef EAI_NODATA
      case EAI_NODATA:
#endif
        rec.status = Resolution::NxDomain;
        break;
      case EAI_AGAIN:
        rec.status = Resolution::Timeout;
        break;
      default:
        rec.status = Resolution::ServFail;
    }
    return rec;
  }
  std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, ::freeaddrinfo);
  for (auto* p = res; p; p = p->ai_next) {
    auto ep = net::Endpoint::from_sockaddr(p->ai_addr);
    if (std::find(rec.addresses.begin(), rec.addresses.end(), ep.address) == rec.addresses.end())
      rec.addresses.push_back(ep.address);
  }
  rec.status = rec.addresses.empty() ? Resolution::NxDomain : Resolution::Ok;
  return rec;
}

StaticResolver StaticResolver::from_file(const std::string& path) { return parse(read_file(path)); }

StaticResolver StaticResolver::parse(std::string_view text) {
  StaticResolver r;
  for (auto line : config_lines(text)) {
    std::replace(line.begin(), line.end(), '\t', ' ');
    auto fields = split(line, ' ');
    fields.erase(std::remove_if(fields.begin(), fields.end(), [](auto& f) { return f.empty(); }), fields.end());
    if (fields.size() != 2) qr::fail(Errc::ConfigInvalid, "resolver line needs 'name answer': " + line);
    auto name = normalize_name(fields[0]);
    auto answer = fields[1];
    if (answer == "NXDOMAIN") {
      r.fail(name, Resolution::NxDomain);
    } else if (answer == "SERVFAIL") {
      r.fail(name, Resolution::ServFail);
    } else if (answer == "TIMEOUT") {
      r.fail(name, Resolution::Timeout);
    } else {
      std::vector<net::IpAddress> addrs;
      for (const auto& a : split(answer, ',')) {
        auto ip = net::IpAddress::parse(a);
        if (!ip) qr::fail(Errc::ConfigInvalid, "bad address '" + a + "' for " + name);
        addrs.push_back(*ip);
      }
      r.add(name, std::move(addrs));
    }
  }
  return r;
}

void StaticResolver::add(const std::string& name, std::vector<net::IpAddress> addresses) {
  auto n = normalize_name(name);
  auto& rec = records_[n];
  rec.name = n;
  rec.status = Resolution::Ok;
  rec.addresses = std::move(addresses);
  if (rec.addresses.empty()) rec.status = Resolution::NxDomain;
}

void StaticResolver::fail(const std::string& name, Resolution status) {
  auto n = normalize_name(name);
  records_[n] = DomainRecord{n, {}, status};
}

DomainRecord StaticResolver::resolve(const std::string& name) {
  auto it = records_.find(normalize_name(name));
  if (it == records_.end()) return DomainRecord{name, {}, Resolution::NxDomain};
  return it->second;
}

}  // namespace qr::domain
