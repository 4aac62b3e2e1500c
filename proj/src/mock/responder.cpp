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

#include "mock/responder.hpp"

#include <poll.h>
#include <sys/eventfd.h>
#include <unistd.h>

#include <algorithm>
#include <queue>
#include <random>

#include "common/crypto.hpp"
#include "net/udp_socket.hpp"

namespace qr::mock {

const char* action_name(Action a) {
  switch (a) {
    case Action::VersionNegotiation: return "version_negotiation";
    case Action::PublicReset: return "public_reset";
    case Action::Rej: return "rej";
    case Action::Garbage: return "garbage";
    case Action::Silent: return "silent";
    case Action::Dropped: return "dropped";
    case Action::Undecodable: return "undecodable";
  }
  return "unknown";
}

namespace {

std::uint64_t next_random(std::uint64_t& state) {
  // splitmix64
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Bytes random_octets(std::uint64_t& state, std::size_t n) {
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(next_random(state));
  return out;
}

const Bytes kProofKey = to_bytes("quic-recon test signing key");

}  // namespace

Reply respond(const ResponderProfile& profile, const wire::HandshakePacket& inbound, std::uint64_t& rng_state) {
  const std::uint64_t cid = inbound.header.connection_id.value_or(0);
  switch (profile.behavior) {
    case Behavior::Silent:
      return {Action::Silent, {}};
    case Behavior::Reset: {
      wire::PublicResetPacket p;
      p.connection_id = cid;
      p.body.message_tag = wire::tags::PRST;
      p.body.set(wire::tags::RNON, random_octets(rng_state, 8));
      ByteWriter seq;
      seq.u64(inbound.header.packet_number);
      p.body.set(wire::tags::RSEQ, seq.take());
      return {Action::PublicReset, wire::encode_public_reset(p)};
    }
    case Behavior::Malformed: {
      if (!profile.malformed_payload.empty()) return {Action::Garbage, profile.malformed_payload};
      auto g = random_octets(rng_state, 64);
      g[0] |= 0x80;
      return {Action::Garbage, g};
    }
    case Behavior::Negotiate:
    case Behavior::ServeRej:
      break;
  }

  const auto& offered = *inbound.header.version;
  bool supported = std::find(profile.supported_versions.begin(), profile.supported_versions.end(), offered) !=
                   profile.supported_versions.end();
  if (!supported) {
    wire::VersionNegotiationPacket vn{cid, profile.supported_versions};
    return {Action::VersionNegotiation, wire::encode_version_negotiation(vn)};
  }
  if (!profile.scfg) return {Action::Silent, {}};

  const auto& chlo = inbound.message;
  wire::HandshakeMessage rej;
  rej.message_tag = wire::tags::REJ;
  auto scfg = wire::encode_server_config(*profile.scfg);
  auto proof = hmac_sha256(kProofKey, scfg);
  rej.set(wire::tags::PROF, Bytes(proof.begin(), proof.end()));
  rej.set(wire::tags::SCFG, std::move(scfg));
  rej.set(wire::tags::STK, profile.source_token);
  rej.set(wire::tags::SNO, random_octets(rng_state, 16));

  std::string sni;
  if (const Bytes* s = chlo.find(wire::tags::SNI)) sni = to_string(*s);
  bool token_ok = !profile.require_stk;
  if (const Bytes* stk = chlo.find(wire::tags::STK)) token_ok = token_ok || *stk == profile.source_token;
  if (token_ok) {
    if (const auto* chain = profile.chain_for(sni)) rej.set(wire::tags::CRT, wire::encode_cert_chain(*chain, profile.crt_encoding));
  }

  wire::HandshakePacket reply;
  reply.header.connection_id = inbound.header.connection_id;
  reply.header.packet_number = 1;
  reply.message = std::move(rej);
  return {Action::Rej, wire::encode_handshake_packet(reply)};
}

struct Responder::Impl {
  std::vector<ResponderProfile> profiles;
  ResponderOptions options;
  net::UdpSocket socket;
  int wake_fd = -1;
  ResponderLog log;
  std::uint64_t rng_state = 0;
  std::mt19937_64 drop_rng;

  struct Pending {
    SteadyTime due;
    net::Endpoint peer;
    std::optional<net::IpAddress> source;
    Bytes payload;
    bool operator>(const Pending& o) const { return due > o.due; }
  };
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> pending;

  const ResponderProfile& select(const wire::HandshakePacket& p) const {
    const ResponderProfile* fallback = nullptr;
    for (const auto& prof : profiles) {
      if (!prof.cid_range) {
        if (!fallback) fallback = &prof;
        continue;
      }
      if (p.header.connection_id && *p.header.connection_id >= prof.cid_range->first &&
          *p.header.connection_id <= prof.cid_range->second)
        return prof;
    }
    return fallback ? *fallback : profiles.front();
  }

  void send(const net::Endpoint& peer, const std::optional<net::IpAddress>& source, ByteView payload) {
    try {
      if (source && !(source->is_v4() && source->v4_host_order() == 0))
        socket.send_from(peer, *source, payload);
      else
        socket.send_to(peer, payload);
    } catch (const Error&) {
      // Unreachable peers are not the responder's problem.
    }
  }

  void handle(const net::Datagram& d, ByteView data) {
    LogEntry entry;
    entry.timestamp = std::chrono::system_clock::now();
    entry.peer = d.peer;
    entry.inbound_size = d.size;

    wire::HandshakePacket inbound;
    try {
      inbound = wire::decode_client_packet(data);
    } catch (const Error&) {
      entry.action = Action::Undecodable;
      log.push_back(std::move(entry));
      return;
    }
    const auto& profile = select(inbound);
    entry.profile = profile.name;

    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (profile.drop_probability > 0.0 && u(drop_rng) < profile.drop_probability) {
      entry.action = Action::Dropped;
    } else {
      auto reply = respond(profile, inbound, rng_state);
      entry.action = reply.action;
      if (!reply.payload.empty()) {
        if (profile.reply_delay.count() > 0) {
          pending.push(Pending{std::chrono::steady_clock::now() + profile.reply_delay, d.peer, d.local, std::move(reply.payload)});
        } else {
          send(d.peer, d.local, reply.payload);
        }
      }
    }
    if (options.keep_packets) entry.inbound = std::move(inbound);
    log.push_back(std::move(entry));
  }

  void run(const std::atomic<bool>& stop) {
    std::vector<std::uint8_t> buf(65536);
    while (!stop.load(std::memory_order_relaxed)) {
      int timeout_ms = 50;
      auto now = std::chrono::steady_clock::now();
      while (!pending.empty() && pending.top().due <= now) {
        auto p = pending.top();
        pending.pop();
        send(p.peer, p.source, p.payload);
      }
      if (!pending.empty()) {
        auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(pending.top().due - now).count() + 1;
        timeout_ms = static_cast<int>(std::min<long long>(timeout_ms, wait));
      }
      pollfd fds[2] = {{socket.fd(), POLLIN, 0}, {wake_fd, POLLIN, 0}};
      if (::poll(fds, 2, timeout_ms) <= 0) continue;
      if (fds[1].revents & POLLIN) break;
      while (auto d = socket.recv_from(buf)) handle(*d, ByteView(buf.data(), d->size));
    }
  }

  std::atomic<bool> stop{false};
};

Responder::Responder(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

std::unique_ptr<Responder> Responder::serve(std::vector<ResponderProfile> profiles, const net::Endpoint& bind,
                                            ResponderOptions options) {
  if (profiles.empty()) fail(Errc::ConfigInvalid, "no responder profiles");
  for (const auto& p : profiles) p.validate();

  auto impl = std::make_unique<Impl>();
  impl->rng_state = profiles.front().seed;
  impl->drop_rng.seed(profiles.front().seed);
  impl->profiles = std::move(profiles);
  impl->options = options;
  impl->socket = net::UdpSocket(bind.address.family());
  impl->socket.bind(bind);
  impl->socket.enable_pktinfo();
  impl->socket.set_buffer_sizes(8 << 20);
  impl->wake_fd = ::eventfd(0, EFD_CLOEXEC | EFD_NONBLOCK);
  if (impl->wake_fd < 0) fail(Errc::SocketError, "eventfd failed");

  std::unique_ptr<Responder> r(new Responder(std::move(impl)));
  r->local_ = r->impl_->socket.local_endpoint();
  Impl* raw = r->impl_.get();
  r->thread_ = std::thread([raw] { raw->run(raw->stop); });
  return r;
}

const ResponderLog& Responder::shutdown() {
  std::call_once(stopped_, [this] {
    impl_->stop.store(true);
    std::uint64_t one = 1;
    [[maybe_unused]] auto n = ::write(impl_->wake_fd, &one, sizeof one);
    if (thread_.joinable()) thread_.join();
    // Drain datagrams that arrived before the stop so the log counts them.
    std::vector<std::uint8_t> buf(65536);
    while (auto d = impl_->socket.recv_from(buf)) impl_->handle(*d, ByteView(buf.data(), d->size));
    impl_->socket.close();
    ::close(impl_->wake_fd);
    impl_->wake_fd = -1;
  });
  return impl_->log;
}

Responder::~Responder() { shutdown(); }

}  // namespace qr::mock
