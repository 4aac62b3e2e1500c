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

#include <csignal>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quicrecon/quicrecon.h"

namespace {

qr_options* g_opts = nullptr;

extern "C" void on_sigint(int) {
  // A second ^C falls through to the default action.
  std::signal(SIGINT, SIG_DFL);
  std::signal(SIGTERM, SIG_DFL);
  if (g_opts) qr_options_request_stop(g_opts);
}

void log_line(const char* line, void* quiet) {
  if (!*static_cast<bool*>(quiet)) std::fprintf(stderr, "%s\n", line);
}

struct Args {
  std::string config;
  std::optional<double> rate;
  std::optional<double> timeout;
  std::string resume;
  std::string out;
  std::string format;
  bool quiet = false;
};

int fatal(const char* what) {
  std::fprintf(stderr, "quic-recon: %s\n", what);
  return 1;
}

int run(const std::string& kind, const Args& a) {
  qr_config* cfg = nullptr;
  qr_status st = QR_OK;
  if (!a.config.empty())
    st = qr_config_load(a.config.c_str(), kind.c_str(), &cfg);
  else if (a.resume.empty())
    st = qr_config_new(kind.c_str(), &cfg);
  if (st != QR_OK) return fatal(qr_last_error());

  qr_options* opts = qr_options_new();
  if (!opts) {
    qr_config_free(cfg);
    return fatal("out of memory");
  }
  bool quiet = a.quiet;
  qr_options_set_log(opts, log_line, &quiet);
  if (!a.resume.empty()) st = qr_options_set_resume(opts, a.resume.c_str());
  if (st == QR_OK && a.rate) st = qr_options_set_rate(opts, *a.rate);
  if (st == QR_OK && a.timeout) st = qr_options_set_timeout(opts, *a.timeout);
  if (st == QR_OK && !a.out.empty()) st = qr_options_set_out(opts, a.out.c_str());
  if (st == QR_OK && !a.format.empty()) st = qr_options_set_format(opts, a.format.c_str());

  int code = 0;
  if (st != QR_OK) {
    code = fatal(qr_last_error());
  } else {
    g_opts = opts;
    std::signal(SIGINT, on_sigint);
    std::signal(SIGTERM, on_sigint);
    qr_result* res = nullptr;
    st = qr_campaign_run(cfg, opts, &res);
    std::signal(SIGINT, SIG_DFL);
    std::signal(SIGTERM, SIG_DFL);
    g_opts = nullptr;
    if (st != QR_OK) {
      code = fatal(qr_last_error());
    } else {
      for (size_t i = 0; i < qr_result_artifact_count(res); ++i) std::printf("%s\n", qr_result_artifact(res, i));
      if (*qr_result_summary(res)) std::fprintf(stderr, "%s\n", qr_result_summary(res));
      code = qr_result_exit_status(res);
      qr_result_free(res);
    }
  }
  qr_options_free(opts);
  qr_config_free(cfg);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gQUIC reconnaissance campaigns"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("quic-recon ") + qr_version());

  struct Sub {
    const char* kind;
    const char* help;
  };
  const std::vector<Sub> subs = {
      {"probe-ips", "probe IPv4 targets for gQUIC support"},
      {"scan-domains", "resolve, handshake and classify domains"},
      {"grab", "collect server configs and certificates"},
      {"traffic", "per-operator protocol shares from flows or pcap"},
      {"report", "aggregate earlier campaign outputs"},
      {"selftest", "run the mock-responder self check"},
  };

  Args args;
  std::string chosen;
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.kind, s.help);
    sc->add_option("--config", args.config, "campaign config (JSON)")->check(CLI::ExistingFile);
    sc->add_option("--resume", args.resume, "resume a checkpointed campaign by id");
    sc->add_option("--rate", args.rate, "probe rate in packets per second")->check(CLI::PositiveNumber);
    sc->add_option("--timeout", args.timeout, "per-target timeout in seconds")->check(CLI::PositiveNumber);
    sc->add_option("--out", args.out, "output path");
    sc->add_option("--format", args.format, "output format")->check(CLI::IsMember({"jsonl", "csv"}));
    sc->add_flag("-q,--quiet", args.quiet, "suppress progress lines");
    sc->callback([&chosen, kind = std::string(s.kind)] { chosen = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (chosen != "selftest" && args.config.empty() && args.resume.empty()) {
    std::fprintf(stderr, "quic-recon %s: --config or --resume is required\n", chosen.c_str());
    return 2;
  }
  return run(chosen, args);
}
