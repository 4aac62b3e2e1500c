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

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "net/address.hpp"

namespace qr::domain {

enum class Resolution { Ok, NxDomain, ServFail, Timeout };

const char* resolution_name(Resolution r);

struct DomainRecord {
  std::string name;
  std::vector<net::IpAddress> addresses;  // non-empty iff Ok
  Resolution status = Resolution::NxDomain;
};

// Lowercases and strips one trailing dot. Throws InvalidArgument on an empty
// or non-DNS name.
std::string normalize_name(std::string_view name);

class Resolver {
 public:
  virtual ~Resolver() = default;
  virtual DomainRecord resolve(const std::string& name) = 0;
};

// getaddrinfo-backed stub resolver (A and AAAA).
class SystemResolver final : public Resolver {
 public:
  DomainRecord resolve(const std::string& name) override;
};

// Fixed answers, for tests and offline replays. File format, one per line:
//   name addr[,addr...]      or      name NXDOMAIN|SERVFAIL|TIMEOUT
class StaticResolver final : public Resolver {
 public:
  StaticResolver() = default;
  static StaticResolver from_file(const std::string& path);
  static StaticResolver parse(std::string_view text);

  void add(const std::string& name, std::vector<net::IpAddress> addresses);
  void fail(const std::string& name, Resolution status);
  DomainRecord resolve(const std::string& name) override;

 private:
  std::map<std::string, DomainRecord> records_;
};

}  // namespace qr::domain
