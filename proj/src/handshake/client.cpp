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

#include "handshake/client.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"

#include "common/error.hpp"
#include "net/udp_socket.hpp"

namespace qr::handshake {

using Clock = std::chrono::steady_clock;

const char* status_name(HandshakeStatus s) {
  switch (s) {
    case HandshakeStatus::QuicEnabled: return "quic_enabled";
    case HandshakeStatus::VersionFailed: return "version_failed";
    case HandshakeStatus::ProtocolError: return "protocol_error";
    case HandshakeStatus::Timeout: return "timeout";
  }
  return "unknown";
}

std::optional<HandshakeStatus> parse_status(std::string_view s) {
  for (auto v : {HandshakeStatus::QuicEnabled, HandshakeStatus::VersionFailed, HandshakeStatus::ProtocolError,
                 HandshakeStatus::Timeout})
    if (s == status_name(v)) return v;
  return std::nullopt;
}

std::vector<wire::VersionTag> default_fallback_versions() {
  std::vector<wire::VersionTag> out;
  for (int n = 39; n >= 30; --n) out.push_back(wire::VersionTag::from("Q0" + std::to_string(n)));
  return out;
}

void HandshakeParams::validate() const {
  if (max_rounds < 1) fail(Errc::InvalidArgument, "max_rounds must be at least 1");
  if (timeout.count() <= 0) fail(Errc::InvalidArgument, "timeout must be positive");
  if (!version.is_recognized()) fail(Errc::InvalidArgument, "offered version must be recognized");
  if (sni.size() > 253) fail(Errc::InvalidArgument, "sni too long");
  for (char c : sni)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.'))
      fail(Errc::InvalidArgument, "sni is not a DNS name: " + sni);
}

namespace {

class Session {
 public:
  Session(const net::Endpoint& target, const HandshakeParams& p) : target_(target), p_(p), buf_(65536) {
    std::random_device rd;
    cid_ = (std::uint64_t{rd()} << 32) | rd();
    socket_ = net::UdpSocket(target.address.family());
    socket_.bind({target.address.is_v4() ? *net::IpAddress::parse("0.0.0.0") : *net::IpAddress::parse("::"), 0});
  }

  HandshakeResult run() {
    version_ = p_.version;
    bool negotiated = false;
    for (;;) {
      auto outcome = attempt();
      if (outcome == Next::Renegotiate && !negotiated) {
        negotiated = true;
        continue;
      }
      if (outcome == Next::Renegotiate) {
        r_.status = HandshakeStatus::ProtocolError;
        r_.trace.events.back().note = "second version negotiation";
      }
      break;
    }
    if (r_.status != HandshakeStatus::QuicEnabled) {
      r_.scfg.reset();
      r_.certs.reset();
      r_.unsupported_compression = false;
    } else {
      r_.negotiated_version = version_;
    }
    return std::move(r_);
  }

 private:
  enum class Next { Done, Renegotiate };

  void record(Direction d, std::string kind, ByteView raw) {
    TraceEvent e{d, std::chrono::system_clock::now(), std::move(kind), Bytes(raw.begin(), raw.end()), std::nullopt, {}, {}};
    if (!r_.trace.events.empty() && e.timestamp < r_.trace.events.back().timestamp)
      e.timestamp = r_.trace.events.back().timestamp;
    r_.trace.events.push_back(std::move(e));
  }

  wire::HandshakeMessage next_chlo() const {
    wire::HandshakeMessage m;
    m.message_tag = wire::tags::CHLO;
    if (!p_.sni.empty()) m.set(wire::tags::SNI, to_bytes(p_.sni));
    m.set(wire::tags::PDMD, to_bytes("X509"));
    if (r_.source_token) m.set(wire::tags::STK, *r_.source_token);
    if (r_.scfg) m.set(wire::tags::SCID, Bytes(r_.scfg->scid.begin(), r_.scfg->scid.end()));
    return m;
  }

  std::optional<std::size_t> await_reply(SteadyTime deadline) {
    for (;;) {
      auto now = Clock::now();
      if (now >= deadline) return std::nullopt;
      if (!socket_.wait_readable(std::chrono::duration_cast<std::chrono::microseconds>(deadline - now))) continue;
      while (auto d = socket_.recv_from(buf_)) {
        if (d->peer == target_) return d->size;
        // Stray datagram from another host: not part of this exchange.
      }
    }
  }

  Next attempt() {
    bool got_rej = false;
    for (unsigned round = 0; round < p_.max_rounds; ++round) {
      auto chlo = next_chlo();
      auto packet = wire::build_client_hello(cid_, version_, p_.pad_to, chlo);
      auto sent_at = Clock::now();
      if (!socket_.send_to(target_, packet)) {
        // Fresh socket with a full send buffer: treat as a lost packet.
      }
      ++r_.chlo_sent;
      record(Direction::Sent, "chlo", packet);
      r_.trace.events.back().message = wire::decode_client_packet(packet).message;

      auto size = await_reply(sent_at + p_.timeout);
      if (!size) {
        r_.status = got_rej ? HandshakeStatus::QuicEnabled : HandshakeStatus::Timeout;
        return Next::Done;
      }
      if (r_.rtt.count() == 0)
        r_.rtt = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - sent_at);
      ByteView data(buf_.data(), *size);
      auto response = wire::decode_server_response(data);

      if (auto* vn = std::get_if<wire::VersionNegotiationPacket>(&response)) {
        record(Direction::Received, "version_negotiation", data);
        r_.trace.events.back().versions = vn->versions;
        r_.server_versions = vn->versions;
        if (got_rej) return protocol_error("negotiation after REJ");
        auto pick = choose_version(vn->versions);
        if (!pick) {
          r_.status = HandshakeStatus::VersionFailed;
          return Next::Done;
        }
        version_ = *pick;
        return Next::Renegotiate;
      }
      if (auto* rst = std::get_if<wire::PublicResetPacket>(&response)) {
        record(Direction::Received, "public_reset", data);
        if (rst->body_valid) r_.trace.events.back().message = rst->body;
        return protocol_error("public reset");
      }
      if (auto* bad = std::get_if<wire::Malformed>(&response)) {
        record(Direction::Received, "malformed", data);
        return protocol_error(bad->reason);
      }
      auto& hs = std::get<wire::HandshakePacket>(response);
      bool is_rej = hs.message.message_tag == wire::tags::REJ;
      record(Direction::Received, is_rej ? "rej" : "unexpected", data);
      r_.trace.events.back().message = hs.message;
      if (!is_rej) return protocol_error("expected REJ, got " + hs.message.message_tag.name());
      if (hs.header.connection_id && *hs.header.connection_id != cid_) return protocol_error("connection id mismatch");
      if (!absorb(hs.message)) return Next::Done;
      got_rej = true;
      if (r_.scfg && (r_.certs || r_.unsupported_compression)) break;
    }
    r_.status = HandshakeStatus::QuicEnabled;
    return Next::Done;
  }

  // False after a protocol error.
  bool absorb(const wire::HandshakeMessage& rej) {
    try {
      if (const Bytes* s = rej.find(wire::tags::SCFG)) r_.scfg = wire::decode_server_config(*s);
      if (const Bytes* s = rej.find(wire::tags::STK)) r_.source_token = *s;
      if (const Bytes* s = rej.find(wire::tags::CRT)) {
        auto decoded = wire::decode_cert_chain(*s);
        if (decoded.chain)
          r_.certs = std::move(decoded.chain);
        else
          r_.unsupported_compression = true;
      }
    } catch (const Error& e) {
      protocol_error(std::string("bad REJ: ") + e.what());
      return false;
    }
    return true;
  }

  Next protocol_error(const std::string& why) {
    r_.status = HandshakeStatus::ProtocolError;
    r_.trace.events.back().note = why;
    return Next::Done;
  }

  std::optional<wire::VersionTag> choose_version(const std::vector<wire::VersionTag>& server) const {
    std::optional<wire::VersionTag> best;
    auto offered = [&](const wire::VersionTag& v) {
      return v == p_.version || std::find(p_.fallback_versions.begin(), p_.fallback_versions.end(), v) !=
                                    p_.fallback_versions.end();
    };
    for (const auto& v : server) {
      if (!v.is_recognized() || !offered(v)) continue;
      if (!best || *v.number() > *best->number()) best = v;
    }
    return best;
  }

  net::Endpoint target_;
  const HandshakeParams& p_;
  net::UdpSocket socket_;
  std::vector<std::uint8_t> buf_;
  std::uint64_t cid_;
  wire::VersionTag version_;
  HandshakeResult r_;
};

}  // namespace

HandshakeResult perform_handshake(const net::Endpoint& target, const HandshakeParams& params) {
  params.validate();
  Session s(target, params);
  return s.run();
}

std::string handshake_to_jsonl(const std::string& host, const net::Endpoint& target, const HandshakeParams& params,
                               const HandshakeResult& r, std::optional<CertVerdict> verdict) {
  nlohmann::json j;
  j["host"] = host.empty() ? target.address.to_string() : host;
  j["addr"] = target.to_string();
  j["sni"] = params.sni;
  j["status"] = status_name(r.status);
  j["version"] = r.negotiated_version ? nlohmann::json(r.negotiated_version->to_string()) : nlohmann::json(nullptr);
  j["scid_hex"] = r.scfg ? nlohmann::json(hex_encode(ByteView(r.scfg->scid.data(), r.scfg->scid.size())))
                         : nlohmann::json(nullptr);
  auto fps = nlohmann::json::array();
  std::string cn;
  if (r.certs && !r.certs->entries.empty()) {
    for (const auto& der : r.certs->entries) {
      auto d = sha256(der);
      fps.push_back(hex_encode(ByteView(d.data(), d.size())));
    }
    try {
      cn = leaf_common_name(r.certs->entries.front());
    } catch (const Error&) {
    }
  }
  j["cert_fingerprints"] = fps;
  j["leaf_cn"] = cn;
  j["cert_valid"] = verdict ? nlohmann::json(verdict->valid) : nlohmann::json(nullptr);
  j["rtt_ms"] = r.status == HandshakeStatus::Timeout ? nlohmann::json(nullptr)
                                                      : nlohmann::json(std::round(r.rtt.count() / 10.0) / 100.0);
  return j.dump();
}

GrabRecord grab_record_from_jsonl(std::string_view line) {
  try {
    auto j = nlohmann::json::parse(line);
    GrabRecord g;
    g.host = j.at("host").get<std::string>();
    g.status = j.at("status").get<std::string>();
    for (const auto& f : j.value("cert_fingerprints", nlohmann::json::array())) g.cert_fingerprints.push_back(f);
    g.leaf_cn = j.value("leaf_cn", "");
    if (j.contains("cert_valid") && j["cert_valid"].is_boolean()) g.cert_valid = j["cert_valid"].get<bool>();
    return g;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::MalformedRecord, e.what());
  }
}

}  // namespace qr::handshake
