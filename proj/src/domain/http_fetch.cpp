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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "domain/http_fetch.hpp"

#include "common/error.hpp"
#include "common/text.hpp"

namespace qr::domain {

std::vector<std::string> HttpResponse::header_values(const std::string& lower_name) const {
  std::vector<std::string> out;
  auto [lo, hi] = headers.equal_range(lower_name);
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  return out;
}

namespace {

template <typename Client>
HttpResponse run(Client& cli, const HttpRequest& req) {
  auto secs = req.timeout.count() / 1000;
  auto usecs = (req.timeout.count() % 1000) * 1000;
  cli.set_connection_timeout(secs, usecs);
  cli.set_read_timeout(secs, usecs);
  cli.set_write_timeout(secs, usecs);
  httplib::Headers headers{{"Host", req.host}, {"User-Agent", "quic-recon/1.0"}};
  auto res = req.head_only ? cli.Head(req.path, headers) : cli.Get(req.path, headers);
  if (!res) {
    auto err = res.error();
    std::string what = httplib::to_string(err);
    if (err == httplib::Error::SSLConnection || err == httplib::Error::SSLServerVerification ||
        err == httplib::Error::SSLLoadingCerts)
      fail(Errc::TlsFailed, req.host + ": " + what);
    fail(Errc::ConnectFailed, req.host + ": " + what);
  }
  HttpResponse out;
  out.status = res->status;
  for (const auto& [k, v] : res->headers) out.headers.emplace(to_lower(k), v);
  out.body = std::move(res->body);
  return out;
}

}  // namespace

HttpResponse http_get(const HttpRequest& req) {
  // Connecting to a fixed address keeps the name for Host and SNI.
  std::map<std::string, std::string> pin;
  if (req.connect_address) pin[req.host] = req.connect_address->to_string();
  if (req.https) {
    httplib::SSLClient cli(req.host, req.port);
    cli.enable_server_certificate_verification(req.verify_tls);
    cli.set_hostname_addr_map(pin);
    return run(cli, req);
  }
  httplib::Client cli(req.host, req.port);
  cli.set_hostname_addr_map(pin);
  return run(cli, req);
}

std::optional<std::string> grab_server_banner(const net::IpAddress& addr, std::uint16_t port,
                                              std::chrono::milliseconds timeout) {
  HttpRequest req;
  req.host = addr.to_string();
  req.port = port;
  req.connect_address = addr;
  req.timeout = timeout;
  auto res = http_get(req);
  auto v = res.header_values("server");
  if (v.empty()) return std::nullopt;
  return v.front();
}

}  // namespace qr::domain
