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

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "net/address.hpp"

namespace qr::domain {

struct HttpRequest {
  std::string host;  // Host header and TLS SNI
  std::uint16_t port = 80;
  bool https = false;
  // Connect here instead of resolving `host`.
  std::optional<net::IpAddress> connect_address;
  std::string path = "/";
  std::chrono::milliseconds timeout{10000};
  bool head_only = false;
  // Measurement fetches do not verify certificates; that is validate_certificate's job.
  bool verify_tls = false;
};

struct HttpResponse {
  int status = 0;
  // Header names lowercased; repeated headers keep every value in order.
  std::multimap<std::string, std::string> headers;
  std::string body;

  std::vector<std::string> header_values(const std::string& lower_name) const;
};

// Throws ConnectFailed (connect, timeout, read errors), TlsFailed.
HttpResponse http_get(const HttpRequest& req);

// HTTP/1.1 GET / on port 80 recording the Server header; nullopt when the
// server sent none. Throws ConnectFailed.
std::optional<std::string> grab_server_banner(const net::IpAddress& addr, std::uint16_t port = 80,
                                              std::chrono::milliseconds timeout = std::chrono::seconds(10));

}  // namespace qr::domain
