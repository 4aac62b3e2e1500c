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

#include "quicrecon/quicrecon.h"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <sstream>
#include <streambuf>
#include <string>
#include <variant>

#include "campaign/campaign.hpp"
#include "campaign/config.hpp"
#include "common/error.hpp"
#include "json.hpp"
#include "wire/packets.hpp"

#ifndef QUICRECON_VERSION
#define QUICRECON_VERSION "0.0.0"
#endif

using qr::campaign::CampaignConfig;
using qr::campaign::CampaignOptions;
using qr::campaign::CampaignResult;

struct qr_config {
  CampaignConfig cfg;
  std::string snapshot;
};

struct qr_options {
  CampaignOptions opts;
  std::atomic<bool> stop{false};
  qr_line_fn log_fn = nullptr;
  void* log_user = nullptr;
};

struct qr_result {
  CampaignResult r;
};

namespace {

thread_local std::string g_last_error;

// Forwards complete lines to a callback.
class LineBuf : public std::streambuf {
 public:
  LineBuf(qr_line_fn fn, void* user) : fn_(fn), user_(user) {}
  ~LineBuf() override { flush_line(); }

 protected:
  int overflow(int c) override {
    if (c == traits_type::eof()) return 0;
    if (c == '\n')
      flush_line();
    else
      line_.push_back(static_cast<char>(c));
    return c;
  }

 private:
  void flush_line() {
    if (line_.empty()) return;
    fn_(line_.c_str(), user_);
    line_.clear();
  }

  qr_line_fn fn_;
  void* user_;
  std::string line_;
};

qr_status set_error(qr_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <typename F>
qr_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return QR_OK;
  } catch (const qr::Error& e) {
    return set_error(static_cast<qr_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(QR_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(QR_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(QR_E_INTERNAL, "unknown error");
  }
}

std::optional<qr::campaign::CampaignKind> kind_arg(const char* kind) {
  if (!kind) return std::nullopt;
  auto k = qr::campaign::parse_kind(kind);
  if (!k) qr::fail(qr::Errc::InvalidArgument, std::string("unknown campaign kind '") + kind + "'");
  return k;
}

nlohmann::ordered_json message_json(const qr::wire::HandshakeMessage& m) {
  nlohmann::ordered_json j;
  j["tag"] = m.message_tag.name();
  auto& entries = j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : m.entries) entries.push_back({{"tag", e.tag.name()}, {"value", qr::hex_encode(e.value)}});
  return j;
}

nlohmann::ordered_json response_json(const qr::wire::ServerResponse& resp) {
  using namespace qr::wire;
  nlohmann::ordered_json j;
  j["kind"] = response_kind(resp);
  if (auto* vn = std::get_if<VersionNegotiationPacket>(&resp)) {
    j["connection_id"] = vn->connection_id;
    auto& v = j["versions"] = nlohmann::ordered_json::array();
    for (const auto& t : vn->versions) v.push_back(t.to_string());
  } else if (auto* pr = std::get_if<PublicResetPacket>(&resp)) {
    j["connection_id"] = pr->connection_id;
    j["body_valid"] = pr->body_valid;
    if (pr->body_valid) j["message"] = message_json(pr->body);
  } else if (auto* hp = std::get_if<HandshakePacket>(&resp)) {
    if (hp->header.connection_id) j["connection_id"] = *hp->header.connection_id;
    if (hp->header.version) j["version"] = hp->header.version->to_string();
    j["packet_number"] = hp->header.packet_number;
    j["message"] = message_json(hp->message);
  } else {
    j["reason"] = std::get<Malformed>(resp).reason;
  }
  return j;
}

}  // namespace

extern "C" {

const char* qr_version(void) { return QUICRECON_VERSION; }

const char* qr_status_name(qr_status s) {
  if (s == QR_OK) return "OK";
  if (s == QR_E_INTERNAL) return "Internal";
  if (s < QR_E_INVALID_ARGUMENT || s > QR_E_INTERRUPTED) return "Unknown";
  return qr::errc_name(static_cast<qr::Errc>(s));
}

const char* qr_last_error(void) { return g_last_error.c_str(); }

qr_status qr_config_load(const char* path, const char* kind, qr_config** out) {
  if (!path || !out) return set_error(QR_E_INVALID_ARGUMENT, "path and out are required");
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<qr_config>();
    c->cfg = qr::campaign::load_config(path, kind_arg(kind));
    *out = c.release();
  });
}

qr_status qr_config_parse(const char* json, const char* base_dir, const char* kind, qr_config** out) {
  if (!json || !out) return set_error(QR_E_INVALID_ARGUMENT, "json and out are required");
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<qr_config>();
    c->cfg = qr::campaign::parse_config(json, base_dir ? base_dir : "", kind_arg(kind));
    *out = c.release();
  });
}

qr_status qr_config_new(const char* kind, qr_config** out) {
  if (!kind || !out) return set_error(QR_E_INVALID_ARGUMENT, "kind and out are required");
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<qr_config>();
    c->cfg.kind = *kind_arg(kind);
    *out = c.release();
  });
}

const char* qr_config_kind(const qr_config* cfg) { return cfg ? qr::campaign::kind_name(cfg->cfg.kind) : ""; }

const char* qr_config_snapshot(const qr_config* cfg) {
  if (!cfg) return "";
  auto* c = const_cast<qr_config*>(cfg);
  c->snapshot = c->cfg.snapshot();
  return c->snapshot.c_str();
}

qr_status qr_config_validate(const qr_config* cfg) {
  if (!cfg) return set_error(QR_E_INVALID_ARGUMENT, "cfg is required");
  return guarded([&] { cfg->cfg.validate(); });
}

void qr_config_free(qr_config* cfg) { delete cfg; }

qr_options* qr_options_new(void) {
  auto* o = new (std::nothrow) qr_options;
  if (o) o->opts.stop = &o->stop;
  return o;
}

void qr_options_free(qr_options* opts) { delete opts; }

qr_status qr_options_set_resume(qr_options* opts, const char* campaign_id) {
  if (!opts) return set_error(QR_E_INVALID_ARGUMENT, "opts is required");
  opts->opts.resume_id = campaign_id ? campaign_id : "";
  return QR_OK;
}

qr_status qr_options_set_rate(qr_options* opts, double pps) {
  if (!opts || !(pps > 0.0)) return set_error(QR_E_INVALID_ARGUMENT, "rate must be positive");
  opts->opts.rate = pps;
  return QR_OK;
}

qr_status qr_options_set_timeout(qr_options* opts, double seconds) {
  if (!opts || !(seconds > 0.0)) return set_error(QR_E_INVALID_ARGUMENT, "timeout must be positive");
  opts->opts.timeout_s = seconds;
  return QR_OK;
}

qr_status qr_options_set_out(qr_options* opts, const char* path) {
  if (!opts) return set_error(QR_E_INVALID_ARGUMENT, "opts is required");
  if (path && *path)
    opts->opts.out = path;
  else
    opts->opts.out.reset();
  return QR_OK;
}

qr_status qr_options_set_format(qr_options* opts, const char* format) {
  if (!opts) return set_error(QR_E_INVALID_ARGUMENT, "opts is required");
  if (!format) {
    opts->opts.format.reset();
    return QR_OK;
  }
  auto f = qr::campaign::parse_format(format);
  if (!f) return set_error(QR_E_INVALID_ARGUMENT, std::string("format must be jsonl or csv, not '") + format + "'");
  opts->opts.format = *f;
  return QR_OK;
}

qr_status qr_options_set_log(qr_options* opts, qr_line_fn fn, void* user) {
  if (!opts) return set_error(QR_E_INVALID_ARGUMENT, "opts is required");
  opts->log_fn = fn;
  opts->log_user = user;
  return QR_OK;
}

void qr_options_request_stop(qr_options* opts) {
  if (opts) opts->stop.store(true, std::memory_order_relaxed);
}

qr_status qr_campaign_run(const qr_config* cfg, const qr_options* opts, qr_result** out) {
  if (!out) return set_error(QR_E_INVALID_ARGUMENT, "out is required");
  *out = nullptr;
  return guarded([&] {
    CampaignOptions o;
    if (opts) o = opts->opts;
    std::optional<LineBuf> buf;
    std::optional<std::ostream> log;
    if (opts && opts->log_fn) {
      buf.emplace(opts->log_fn, opts->log_user);
      log.emplace(&*buf);
      o.log = &*log;
    }
    std::optional<CampaignConfig> given;
    if (cfg) given = cfg->cfg;
    auto r = std::make_unique<qr_result>();
    r->r = qr::campaign::run_campaign(given, o);
    *out = r.release();
  });
}

int qr_result_exit_status(const qr_result* r) { return r ? r->r.exit_status : 1; }
const char* qr_result_id(const qr_result* r) { return r ? r->r.id.c_str() : ""; }
const char* qr_result_state_path(const qr_result* r) { return r ? r->r.state_path.c_str() : ""; }
const char* qr_result_summary(const qr_result* r) { return r ? r->r.summary.c_str() : ""; }
int qr_result_resumed(const qr_result* r) { return r && r->r.resumed; }
int qr_result_interrupted(const qr_result* r) { return r && r->r.interrupted; }
uint64_t qr_result_records(const qr_result* r) { return r ? r->r.records : 0; }
uint64_t qr_result_cursor(const qr_result* r) { return r ? r->r.cursor : 0; }
size_t qr_result_artifact_count(const qr_result* r) { return r ? r->r.artifacts.size() : 0; }

const char* qr_result_artifact(const qr_result* r, size_t i) {
  if (!r || i >= r->r.artifacts.size()) return nullptr;
  return r->r.artifacts[i].c_str();
}

void qr_result_free(qr_result* r) { delete r; }

qr_status qr_selftest(unsigned trials_per_cell, qr_line_fn fn, void* user, int* failures) {
  if (trials_per_cell == 0) return set_error(QR_E_INVALID_ARGUMENT, "trials_per_cell must be positive");
  return guarded([&] {
    std::ostringstream sink;
    std::optional<LineBuf> buf;
    std::optional<std::ostream> log;
    std::ostream* os = &sink;
    if (fn) {
      buf.emplace(fn, user);
      log.emplace(&*buf);
      os = &*log;
    }
    int n = qr::campaign::run_selftest(*os, trials_per_cell);
    os->flush();
    if (failures) *failures = n;
  });
}

qr_status qr_decode_server_response(const uint8_t* data, size_t len, char** json) {
  if (!json || (!data && len)) return set_error(QR_E_INVALID_ARGUMENT, "data and json are required");
  *json = nullptr;
  return guarded([&] {
    auto text = response_json(qr::wire::decode_server_response(qr::ByteView(data, len))).dump();
    char* s = static_cast<char*>(std::malloc(text.size() + 1));
    if (!s) throw std::bad_alloc();
    std::memcpy(s, text.c_str(), text.size() + 1);
    *json = s;
  });
}

qr_status qr_build_probe(uint64_t connection_id, const char* version, size_t pad_to, const char* sni, uint8_t* buf,
                         size_t* len) {
  if (!len || (!buf && *len)) return set_error(QR_E_INVALID_ARGUMENT, "buf and len are required");
  return guarded([&] {
    auto v = version ? qr::wire::VersionTag::from(version) : qr::wire::make_unsupported_version();
    auto pkt = qr::wire::build_probe_chlo(connection_id, v, pad_to, sni ? sni : "");
    if (pkt.size() > *len) {
      *len = pkt.size();
      qr::fail(qr::Errc::InvalidArgument, "buffer too small for a " + std::to_string(pkt.size()) + " octet probe");
    }
    std::memcpy(buf, pkt.data(), pkt.size());
    *len = pkt.size();
  });
}

void qr_string_free(char* s) { std::free(s); }

}  // extern "C"
