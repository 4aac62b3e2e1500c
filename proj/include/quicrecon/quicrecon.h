/*
 * Copyright (C) 2026 The quic-recon Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QUICRECON_H
#define QUICRECON_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QR_API __declspec(dllexport)
#else
#define QR_API __attribute__((visibility("default")))
#endif

/* Status codes. Nonzero values match the library's internal error codes. */
typedef enum qr_status {
  QR_OK = 0,
  QR_E_INVALID_ARGUMENT = 1,
  QR_E_UNSORTED_TAGS = 2,
  QR_E_OVERSIZE_VALUE = 3,
  QR_E_TRUNCATED = 4,
  QR_E_NON_MONOTONIC_OFFSETS = 5,
  QR_E_UNKNOWN_LAYOUT = 6,
  QR_E_PAD_TOO_SMALL = 7,
  QR_E_BLOCKLISTED = 8,
  QR_E_SOCKET = 9,
  QR_E_PARSE = 10,
  QR_E_BIND_FAILED = 11,
  QR_E_CONNECT_FAILED = 12,
  QR_E_TLS_FAILED = 13,
  QR_E_CONFIG_INVALID = 14,
  QR_E_RESUME_DIGEST_MISMATCH = 15,
  QR_E_MALFORMED_RECORD = 16,
  QR_E_IO = 17,
  QR_E_UNSUPPORTED_COMPRESSION = 18,
  QR_E_INTERRUPTED = 19,
  QR_E_INTERNAL = 99
} qr_status;

typedef struct qr_config qr_config;
typedef struct qr_options qr_options;
typedef struct qr_result qr_result;

/* Receives one log line at a time, without the trailing newline. */
typedef void (*qr_line_fn)(const char* line, void* user);

QR_API const char* qr_version(void);
QR_API const char* qr_status_name(qr_status s);

/* Message of the last failed call on this thread; "" if none. */
QR_API const char* qr_last_error(void);

/* Campaign kinds: probe-ips, scan-domains, grab, traffic, report, selftest.
 * A non-NULL kind must match the file's "kind" key when present. */
QR_API qr_status qr_config_load(const char* path, const char* kind, qr_config** out);
QR_API qr_status qr_config_parse(const char* json, const char* base_dir, const char* kind, qr_config** out);
/* Default config of the given kind (selftest needs nothing else). */
QR_API qr_status qr_config_new(const char* kind, qr_config** out);
QR_API const char* qr_config_kind(const qr_config* cfg);
/* Canonical JSON of the config with absolute paths. Owned by cfg. */
QR_API const char* qr_config_snapshot(const qr_config* cfg);
QR_API qr_status qr_config_validate(const qr_config* cfg);
QR_API void qr_config_free(qr_config* cfg);

QR_API qr_options* qr_options_new(void);
QR_API void qr_options_free(qr_options* opts);
QR_API qr_status qr_options_set_resume(qr_options* opts, const char* campaign_id);
QR_API qr_status qr_options_set_rate(qr_options* opts, double pps);
QR_API qr_status qr_options_set_timeout(qr_options* opts, double seconds);
QR_API qr_status qr_options_set_out(qr_options* opts, const char* path);
QR_API qr_status qr_options_set_format(qr_options* opts, const char* format);
QR_API qr_status qr_options_set_log(qr_options* opts, qr_line_fn fn, void* user);
/* Asks a running campaign to checkpoint and return. Async-signal-safe. */
QR_API void qr_options_request_stop(qr_options* opts);

/* cfg may be NULL when resuming. On QR_OK *out holds the result; its exit
 * status is 0 when done, 130 when stopped, 1 when selftest checks failed. */
QR_API qr_status qr_campaign_run(const qr_config* cfg, const qr_options* opts, qr_result** out);

QR_API int qr_result_exit_status(const qr_result* r);
QR_API const char* qr_result_id(const qr_result* r);
QR_API const char* qr_result_state_path(const qr_result* r);
QR_API const char* qr_result_summary(const qr_result* r);
QR_API int qr_result_resumed(const qr_result* r);
QR_API int qr_result_interrupted(const qr_result* r);
QR_API uint64_t qr_result_records(const qr_result* r);
QR_API uint64_t qr_result_cursor(const qr_result* r);
QR_API size_t qr_result_artifact_count(const qr_result* r);
QR_API const char* qr_result_artifact(const qr_result* r, size_t i);
QR_API void qr_result_free(qr_result* r);

/* Mock-responder self check; *failures receives the failed check count. */
QR_API qr_status qr_selftest(unsigned trials_per_cell, qr_line_fn fn, void* user, int* failures);

/* Decodes one server datagram. *json receives a malloc'd JSON object
 * ({"kind": "version_negotiation" | "public_reset" | "handshake" |
 * "malformed", ...}); release it with qr_string_free. */
QR_API qr_status qr_decode_server_response(const uint8_t* data, size_t len, char** json);
/* Builds a padded probe CHLO. *len is the buffer size on input and the
 * packet size on output; QR_E_INVALID_ARGUMENT if the buffer is short. */
QR_API qr_status qr_build_probe(uint64_t connection_id, const char* version, size_t pad_to, const char* sni,
                                uint8_t* buf, size_t* len);
QR_API void qr_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* QUICRECON_H */
