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

#include <gtest/gtest.h>

#include <thread>

#include "domain/alt_svc.hpp"
#include "common/error.hpp"
#include "domain/http_fetch.hpp"

namespace qr::domain {
namespace {

std::string fixture(const std::string& name) { return std::string(QR_FIXTURE_DIR) + "/" + name; }

template <typename Server>
class Running {
 public:
  explicit Running(Server& s) : server_(s) {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~Running() {
    server_.stop();
    thread_.join();
  }
  std::uint16_t port() const { return static_cast<std::uint16_t>(port_); }

 private:
  Server& server_;
  int port_ = 0;
  std::thread thread_;
};

void routes(httplib::Server& s) {
  s.Get("/", [](const httplib::Request& req, httplib::Response& res) {
    if (req.get_header_value("Host").starts_with("quic."))
      res.set_header("Alt-Svc", R"(quic=":443"; v="39,38")");
    if (req.get_header_value("Host").starts_with("multi.")) {
      res.set_header("Alt-Svc", R"(h2=":443")");
      res.set_header("Alt-Svc", R"(quic=":443"; ma=86400; v="35")");
    }
    res.set_header("Server", "fixture/1.0");
    res.set_content("<html><title>t</title></html>", "text/html");
  });
}

HttpRequest local(const std::string& host, std::uint16_t port, bool https = false) {
  HttpRequest r;
  r.host = host;
  r.port = port;
  r.https = https;
  r.connect_address = net::IpAddress::parse("127.0.0.1");
  r.timeout = std::chrono::milliseconds(3000);
  return r;
}

TEST(AltSvcFetch, Http) {
  httplib::Server s;
  routes(s);
  Running run(s);
  auto adv = check_alt_svc(local("quic.example", run.port()));
  EXPECT_EQ(adv.source, AltSvcSource::Http);
  ASSERT_EQ(adv.protocols.size(), 1u);
  EXPECT_EQ(adv.protocols[0].versions, (std::vector<std::string>{"39", "38"}));
  EXPECT_TRUE(requires_version(adv, 39));

  EXPECT_TRUE(check_alt_svc(local("plain.example", run.port())).protocols.empty());
  auto multi = check_alt_svc(local("multi.example", run.port()));
  EXPECT_EQ(multi.protocols.size(), 2u);
  EXPECT_FALSE(requires_version(multi, 39));

  EXPECT_EQ(grab_server_banner(*net::IpAddress::parse("127.0.0.1"), run.port()), "fixture/1.0");
}

TEST(AltSvcFetch, Https) {
  httplib::SSLServer s(fixture("https_cert.pem").c_str(), fixture("https_key.pem").c_str());
  routes(s);
  Running run(s);
  auto adv = check_alt_svc(local("quic.example", run.port(), true));
  EXPECT_EQ(adv.source, AltSvcSource::Https);
  EXPECT_TRUE(requires_version(adv, 39));

  // Plain HTTP against the TLS port and TLS against a closed port both fail.
  EXPECT_THROW(check_alt_svc(local("quic.example", run.port(), false)), qr::Error);
}

TEST(AltSvcFetch, ConnectFailed) {
  httplib::Server s;
  std::uint16_t port;
  {
    Running run(s);
    port = run.port();
  }
  try {
    check_alt_svc(local("x.example", port));
    FAIL();
  } catch (const qr::Error& e) {
    EXPECT_EQ(e.code(), Errc::ConnectFailed);
  }
}

TEST(AltSvcFetch, TlsFailed) {
  httplib::Server s;  // speaks plain HTTP
  routes(s);
  Running run(s);
  try {
    check_alt_svc(local("quic.example", run.port(), true));
    FAIL();
  } catch (const qr::Error& e) {
    EXPECT_EQ(e.code(), Errc::TlsFailed);
  }
}

}  // namespace
}  // namespace qr::domain
