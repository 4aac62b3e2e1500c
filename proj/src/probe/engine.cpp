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

#include "probe/engine.hpp"

#include <poll.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <list>
#include <random>
#include <unordered_map>

#include "json.hpp"

#include "common/crypto.hpp"
#include "common/error.hpp"
#include "net/udp_socket.hpp"
#include "wire/packets.hpp"

namespace qr::probe {

using namespace std::chrono_literals;
using Clock = std::chrono::steady_clock;

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::VersionNegotiation: return "version_negotiation";
    case Verdict::PublicReset: return "public_reset";
    case Verdict::Timeout: return "timeout";
    case Verdict::Malformed: return "malformed";
    case Verdict::Handshake: return "handshake";
  }
  return "unknown";
}

std::optional<Verdict> parse_verdict(std::string_view s) {
  for (auto v : {Verdict::VersionNegotiation, Verdict::PublicReset, Verdict::Timeout, Verdict::Malformed,
                 Verdict::Handshake})
    if (s == verdict_name(v)) return v;
  return std::nullopt;
}

void ScanConfig::validate() const {
  if (!(rate > 0.0) || rate > 1e7) fail(Errc::InvalidArgument, "rate must be in (0, 1e7]");
  if (timeout <= 0us) fail(Errc::InvalidArgument, "timeout must be positive");
  if (max_in_flight == 0) fail(Errc::InvalidArgument, "max_in_flight must be positive");
  if (shuffle && shuffle_window == 0) fail(Errc::InvalidArgument, "shuffle window must be positive");
  if (probe_version.is_recognized()) fail(Errc::InvalidArgument, "probe version must not be a recognized version");
  // Rejects bad pad targets up front instead of on the first send.
  wire::build_probe_chlo(0, probe_version, pad_to);
}

std::uint64_t connection_id_for(ByteView secret, const ProbeTarget& t) {
  ByteWriter w;
  w.u8(t.address.is_v4() ? 4 : 6);
  const auto& o = t.address.octets();
  w.raw(ByteView(o.data(), t.address.is_v4() ? 4 : 16));
  w.u16(t.port);
  auto mac = hmac_sha256(secret, w.take());
  ByteReader r(ByteView(mac.data(), 8));
  return r.u64();
}

namespace {

// Two limits: an absolute schedule t0 + i/rate, and a sliding check that the
// packet sent `window` positions earlier is at least one second old.
class Pacer {
 public:
  explicit Pacer(double rate)
      : interval_(1.0 / rate), ring_(static_cast<std::size_t>(std::max(1.0, std::floor(rate)))) {}

  SteadyTime next_allowed() const {
    if (sent_ == 0) return SteadyTime::min();
    auto t = t0_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(interval_ * sent_));
    if (sent_ >= ring_.size()) t = std::max(t, ring_[sent_ % ring_.size()] + 1s);
    return t;
  }

  void record(SteadyTime now) {
    if (sent_ == 0) t0_ = now;
    ring_[sent_ % ring_.size()] = now;
    ++sent_;
  }

  std::size_t bytes() const { return ring_.capacity() * sizeof(SteadyTime); }

 private:
  double interval_;
  std::vector<SteadyTime> ring_;
  SteadyTime t0_{};
  std::uint64_t sent_ = 0;
};

struct Expiry {
  SteadyTime deadline;
  ProbeTarget target;
};

struct InFlight {
  SteadyTime sent_at;
  std::uint64_t cid;
  unsigned attempts;
  std::list<Expiry>::iterator expiry;
};

struct Retry {
  ProbeTarget target;
  unsigned attempts;
};

ProbeOutcome classify(ByteView data, std::uint64_t expected_cid) {
  ProbeOutcome o;
  auto response = wire::decode_server_response(data);
  std::visit(
      [&](auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, wire::VersionNegotiationPacket>) {
          o.verdict = Verdict::VersionNegotiation;
          o.versions = std::move(r.versions);
          o.cid_echo_matched = r.connection_id == expected_cid;
        } else if constexpr (std::is_same_v<T, wire::PublicResetPacket>) {
          o.verdict = Verdict::PublicReset;
          o.reset_body_valid = r.body_valid;
          o.cid_echo_matched = r.connection_id == expected_cid;
        } else if constexpr (std::is_same_v<T, wire::HandshakePacket>) {
          o.verdict = Verdict::Handshake;
          o.cid_echo_matched = r.header.connection_id == expected_cid;
        } else {
          o.verdict = Verdict::Malformed;
        }
      },
      response);
  return o;
}

class Engine {
 public:
  Engine(const ScanConfig& cfg, const ResultSink& sink) : cfg_(cfg), sink_(sink), pacer_(cfg.rate), buf_(65536) {
    secret_ = cfg.secret;
    if (secret_.empty()) {
      std::random_device rd;
      for (int i = 0; i < 32; ++i) secret_.push_back(static_cast<std::uint8_t>(rd()));
    }
    rng_.seed(cfg.seed);
    in_flight_.reserve(std::min<std::size_t>(cfg.max_in_flight, 1024));
  }

  ScanStats run(const TargetSource& source) {
    auto start = Clock::now();
    source_ = &source;
    for (;;) {
      auto now = Clock::now();
      expire(now);
      receive();
      std::optional<SteadyTime> next_send;
      now = Clock::now();
      while (in_flight_.size() < cfg_.max_in_flight) {
        if (retry_.empty() && !staged_) stage();
        if (retry_.empty() && (!staged_ || in_flight_.count(*staged_))) break;
        auto allowed = pacer_.next_allowed();
        if (allowed > now) {
          next_send = allowed;
          break;
        }
        if (!retry_.empty()) {
          auto r = retry_.front();
          retry_.pop_front();
          if (!transmit(r.target, r.attempts + 1, now)) {
            retry_.push_front(r);
            next_send = now + 200us;
            break;
          }
        } else {
          if (!transmit(*staged_, 1, now)) {
            next_send = now + 200us;
            break;
          }
          staged_.reset();
        }
        now = Clock::now();
      }
      note_peak();
      if (exhausted_ && !staged_ && retry_.empty() && in_flight_.empty()) break;

      std::optional<SteadyTime> wake = next_send;
      if (!expiries_.empty() && (!wake || expiries_.front().deadline < *wake)) wake = expiries_.front().deadline;
      wait_until(wake);
    }
    stats_.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start);
    return stats_;
  }

 private:
  std::optional<ProbeTarget> pull_raw() {
    if (!cfg_.shuffle) return (*source_)();
    while (!source_done_ && window_.size() < cfg_.shuffle_window) {
      auto t = (*source_)();
      if (!t) {
        source_done_ = true;
        break;
      }
      window_.push_back(*t);
    }
    if (window_.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, window_.size() - 1);
    std::swap(window_[pick(rng_)], window_.back());
    auto t = window_.back();
    window_.pop_back();
    return t;
  }

  void stage() {
    while (!exhausted_) {
      auto t = pull_raw();
      if (!t) {
        exhausted_ = true;
        return;
      }
      ++stats_.targets;
      if (cfg_.blocklist.contains(t->address)) {
        ++stats_.blocklisted;
        continue;
      }
      staged_ = *t;
      return;
    }
  }

  net::UdpSocket& socket_for(const ProbeTarget& t) {
    bool v4 = t.address.is_v4();
    auto& s = v4 ? sock4_ : sock6_;
    if (!s.valid()) {
      s = net::UdpSocket(v4 ? net::Family::V4 : net::Family::V6);
      auto bind = v4 ? cfg_.bind_v4 : cfg_.bind_v6;
      s.bind(bind ? *bind : net::Endpoint{v4 ? *net::IpAddress::parse("0.0.0.0") : *net::IpAddress::parse("::"), 0});
      s.set_buffer_sizes(4 << 20);
    }
    return s;
  }

  // False when the socket would block; the caller retries later.
  bool transmit(const ProbeTarget& t, unsigned attempts, SteadyTime now) {
    auto cid = connection_id_for(secret_, t);
    auto packet = wire::build_probe_chlo(cid, cfg_.probe_version, cfg_.pad_to);
    try {
      if (!socket_for(t).send_to(t, packet)) return false;
      consecutive_failures_ = 0;
    } catch (const Error& e) {
      if (e.code() != Errc::SocketError || ++consecutive_failures_ > 64) throw;
      // Unroutable target: nothing can come back.
      ProbeOutcome o;
      o.attempts = attempts;
      o.timestamp = std::chrono::system_clock::now();
      emit(t, o);
      return true;
    }
    pacer_.record(now);
    ++stats_.sent;
    if (cfg_.on_send) cfg_.on_send(now);
    expiries_.push_back({now + cfg_.timeout, t});
    in_flight_[t] = InFlight{now, cid, attempts, std::prev(expiries_.end())};
    return true;
  }

  void expire(SteadyTime now) {
    while (!expiries_.empty() && expiries_.front().deadline <= now) {
      auto target = expiries_.front().target;
      auto it = in_flight_.find(target);
      unsigned attempts = it->second.attempts;
      in_flight_.erase(it);
      expiries_.pop_front();
      if (attempts <= cfg_.retries) {
        retry_.push_back({target, attempts});
      } else {
        ProbeOutcome o;
        o.attempts = attempts;
        o.timestamp = std::chrono::system_clock::now();
        emit(target, o);
      }
    }
  }

  void receive() {
    for (auto* s : {&sock4_, &sock6_}) {
      if (!s->valid()) continue;
      while (auto d = s->recv_from(buf_)) {
        auto recv_time = Clock::now();
        auto it = in_flight_.find(d->peer);
        if (it == in_flight_.end()) {
          ++stats_.unmatched;
          continue;
        }
        auto o = classify(ByteView(buf_.data(), d->size), it->second.cid);
        o.rtt = std::chrono::duration_cast<std::chrono::microseconds>(recv_time - it->second.sent_at);
        o.attempts = it->second.attempts;
        o.timestamp = std::chrono::system_clock::now();
        expiries_.erase(it->second.expiry);
        in_flight_.erase(it);
        emit(d->peer, o);
      }
    }
  }

  void emit(const ProbeTarget& t, const ProbeOutcome& o) {
    ++stats_.results;
    if (o.quic_capable()) ++stats_.capable;
    sink_(t, o);
  }

  void wait_until(std::optional<SteadyTime> deadline) {
    pollfd fds[2];
    nfds_t n = 0;
    for (auto* s : {&sock4_, &sock6_})
      if (s->valid()) fds[n++] = {s->fd(), POLLIN, 0};
    auto remaining = deadline ? *deadline - Clock::now() : Clock::duration(100ms);
    if (remaining <= Clock::duration::zero()) return;
    auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(remaining).count();
    timespec ts{static_cast<time_t>(ns / 1'000'000'000), static_cast<long>(ns % 1'000'000'000)};
    ::ppoll(fds, n, &ts, nullptr);
  }

  void note_peak() {
    stats_.peak_in_flight = std::max(stats_.peak_in_flight, in_flight_.size());
    constexpr std::size_t kNodeOverhead = 2 * sizeof(void*);
    std::size_t bytes = sizeof(*this) + pacer_.bytes() + buf_.capacity() + secret_.capacity() +
                        in_flight_.bucket_count() * sizeof(void*) +
                        in_flight_.size() * (sizeof(std::pair<const ProbeTarget, InFlight>) + kNodeOverhead) +
                        expiries_.size() * (sizeof(Expiry) + kNodeOverhead) + retry_.size() * sizeof(Retry) +
                        window_.capacity() * sizeof(ProbeTarget) + cfg_.pad_to;
    stats_.peak_state_bytes = std::max(stats_.peak_state_bytes, bytes);
  }

  const ScanConfig& cfg_;
  const ResultSink& sink_;
  const TargetSource* source_ = nullptr;
  Pacer pacer_;
  Bytes secret_;
  std::mt19937_64 rng_;
  std::vector<std::uint8_t> buf_;
  net::UdpSocket sock4_, sock6_;

  std::unordered_map<ProbeTarget, InFlight, net::EndpointHash> in_flight_;
  std::list<Expiry> expiries_;  // deadline order: every entry uses the same timeout
  std::deque<Retry> retry_;
  std::vector<ProbeTarget> window_;
  std::optional<ProbeTarget> staged_;
  bool exhausted_ = false;
  bool source_done_ = false;
  unsigned consecutive_failures_ = 0;
  ScanStats stats_;
};

}  // namespace

ScanStats scan_targets(const TargetSource& targets, const ScanConfig& cfg, const ResultSink& sink) {
  cfg.validate();
  Engine engine(cfg, sink);
  return engine.run(targets);
}

ProbeOutcome probe_one(const ProbeTarget& target, const ScanConfig& cfg) {
  if (target.port == 0) fail(Errc::InvalidArgument, "port 0");
  if (cfg.blocklist.contains(target.address)) fail(Errc::Blocklisted, target.to_string() + " is blocklisted");
  ProbeOutcome out;
  scan_targets(vector_source({target}), cfg, [&](const ProbeTarget&, const ProbeOutcome& o) { out = o; });
  return out;
}

std::string outcome_to_jsonl(const ProbeTarget& t, const ProbeOutcome& o) {
  nlohmann::json j;
  j["addr"] = t.address.to_string();
  j["port"] = t.port;
  j["verdict"] = verdict_name(o.verdict);
  auto versions = nlohmann::json::array();
  for (const auto& v : o.versions) versions.push_back(v.to_string());
  j["versions"] = versions;
  if (o.verdict == Verdict::Timeout)
    j["rtt_ms"] = nullptr;
  else
    j["rtt_ms"] = std::round(o.rtt.count() / 10.0) / 100.0;
  j["ts"] = iso8601_utc(o.timestamp);
  j["cid_match"] = o.cid_echo_matched;
  return j.dump();
}

ProbeRecord outcome_from_jsonl(std::string_view line) {
  try {
    auto j = nlohmann::json::parse(line);
    ProbeRecord r;
    auto addr = net::IpAddress::parse(j.at("addr").get<std::string>());
    if (!addr) fail(Errc::MalformedRecord, "bad addr");
    r.target.address = *addr;
    r.target.port = j.value("port", 443);
    auto v = parse_verdict(j.at("verdict").get<std::string>());
    if (!v) fail(Errc::MalformedRecord, "bad verdict");
    r.outcome.verdict = *v;
    for (const auto& s : j.value("versions", nlohmann::json::array())) {
      auto text = s.get<std::string>();
      if (text.size() != 4) fail(Errc::MalformedRecord, "bad version '" + text + "'");
      r.outcome.versions.push_back(wire::VersionTag::from(text));
    }
    if (j.contains("rtt_ms") && j["rtt_ms"].is_number())
      r.outcome.rtt = std::chrono::microseconds(static_cast<std::int64_t>(j["rtt_ms"].get<double>() * 1000.0));
    if (j.contains("ts")) r.outcome.timestamp = parse_iso8601_utc(j["ts"].get<std::string>());
    r.outcome.cid_echo_matched = j.value("cid_match", false);
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::MalformedRecord, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::MalformedRecord) throw;
    fail(Errc::MalformedRecord, e.what());
  }
}

}  // namespace qr::probe
