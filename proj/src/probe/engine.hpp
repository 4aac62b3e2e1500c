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
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "common/bytes.hpp"
#include "common/time_util.hpp"
#include "net/address.hpp"
#include "probe/target.hpp"
#include "wire/version_tag.hpp"

namespace qr::probe {

// Handshake: the server answered with a regular handshake packet (REJ/SHLO)
// instead of negotiating. Not counted as capable.
enum class Verdict { VersionNegotiation, PublicReset, Timeout, Malformed, Handshake };

const char* verdict_name(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view s);

struct ProbeOutcome {
  Verdict verdict = Verdict::Timeout;
  std::vector<wire::VersionTag> versions;  // only for VersionNegotiation
  bool cid_echo_matched = false;
  bool reset_body_valid = false;  // only for PublicReset
  std::chrono::microseconds rtt{0};
  SystemTime timestamp{};
  unsigned attempts = 1;

  bool quic_capable() const { return verdict == Verdict::VersionNegotiation || verdict == Verdict::PublicReset; }
};

struct ScanConfig {
  double rate = 10000.0;  // packets per second, retries included
  std::chrono::microseconds timeout = std::chrono::seconds(12);
  unsigned retries = 0;
  net::CidrSet blocklist;
  bool shuffle = false;
  std::size_t shuffle_window = 4096;
  std::uint64_t seed = 0;

  wire::VersionTag probe_version = wire::make_unsupported_version();
  std::size_t pad_to = 1200;
  std::size_t max_in_flight = 65536;
  // Key for connection-id MACs; random per scan when empty.
  Bytes secret;
  std::optional<net::Endpoint> bind_v4;
  std::optional<net::Endpoint> bind_v6;

  // Called after each transmitted probe (observability, rate tests).
  std::function<void(SteadyTime)> on_send;

  // Throws InvalidArgument.
  void validate() const;
};

struct ScanStats {
  std::uint64_t targets = 0;
  std::uint64_t blocklisted = 0;
  std::uint64_t sent = 0;  // datagrams, retries included
  std::uint64_t results = 0;
  std::uint64_t capable = 0;
  std::uint64_t unmatched = 0;  // replies from no in-flight target, late ones included
  std::size_t peak_in_flight = 0;
  // Upper estimate of engine-owned memory at its peak.
  std::size_t peak_state_bytes = 0;
  std::chrono::microseconds elapsed{0};
};

using ResultSink = std::function<void(const ProbeTarget&, const ProbeOutcome&)>;

// Connection id for a target: first 8 octets of HMAC-SHA256(secret, family |
// address | port), little-endian.
std::uint64_t connection_id_for(ByteView secret, const ProbeTarget& t);

// Throws Blocklisted, SocketError.
ProbeOutcome probe_one(const ProbeTarget& target, const ScanConfig& cfg);

// Every non-blocklisted target yields exactly one sink call, in completion
// order. Throws SocketError on persistent socket failure.
ScanStats scan_targets(const TargetSource& targets, const ScanConfig& cfg, const ResultSink& sink);

// {"addr","port","verdict","versions","rtt_ms","ts","cid_match"}
std::string outcome_to_jsonl(const ProbeTarget& t, const ProbeOutcome& o);
struct ProbeRecord {
  ProbeTarget target;
  ProbeOutcome outcome;
};
// Throws MalformedRecord.
ProbeRecord outcome_from_jsonl(std::string_view line);

}  // namespace qr::probe
