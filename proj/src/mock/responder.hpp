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

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "common/time_util.hpp"
#include "mock/profile.hpp"
#include "net/address.hpp"
#include "wire/packets.hpp"

namespace qr::mock {

enum class Action { VersionNegotiation, PublicReset, Rej, Garbage, Silent, Dropped, Undecodable };

const char* action_name(Action a);

struct LogEntry {
  SystemTime timestamp;
  net::Endpoint peer;
  std::optional<wire::HandshakePacket> inbound;  // absent when undecodable or not retained
  std::size_t inbound_size = 0;
  std::string profile;
  Action action = Action::Silent;
};

using ResponderLog = std::vector<LogEntry>;

struct ResponderOptions {
  // Keep decoded inbound packets in the log. Large scans turn this off.
  bool keep_packets = true;
};

// A gQUIC endpoint with scripted behaviour. One receive loop thread; replies
// go out from the address each datagram arrived on, so one responder bound
// to 0.0.0.0 can stand in for many loopback targets.
class Responder {
 public:
  // Throws BindFailed, ConfigInvalid.
  static std::unique_ptr<Responder> serve(std::vector<ResponderProfile> profiles, const net::Endpoint& bind,
                                          ResponderOptions options = {});
  static std::unique_ptr<Responder> serve(ResponderProfile profile, const net::Endpoint& bind,
                                          ResponderOptions options = {}) {
    return serve(std::vector<ResponderProfile>{std::move(profile)}, bind, options);
  }

  ~Responder();
  Responder(const Responder&) = delete;
  Responder& operator=(const Responder&) = delete;

  net::Endpoint local_endpoint() const { return local_; }
  std::uint16_t port() const { return local_.port; }

  // Stops the loop and returns the full log; later calls return the same log.
  const ResponderLog& shutdown();

 private:
  struct Impl;
  explicit Responder(std::unique_ptr<Impl> impl);

  std::unique_ptr<Impl> impl_;
  net::Endpoint local_;
  std::thread thread_;
  std::once_flag stopped_;
};

// Reply bytes for one inbound packet, exposed for direct unit testing.
struct Reply {
  Action action = Action::Silent;
  Bytes payload;  // empty unless action produces a datagram
};
Reply respond(const ResponderProfile& profile, const wire::HandshakePacket& inbound, std::uint64_t& rng_state);

}  // namespace qr::mock
