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

/* Compiled as C to keep the public header C-clean. */

#include <string.h>

#include "quicrecon/quicrecon.h"

int qr_c_smoke(void) {
  uint8_t buf[1400];
  size_t len = sizeof buf;
  char* json = NULL;
  int ok;

  if (qr_build_probe(0x0102030405060708ull, "Q035", 1200, NULL, buf, &len) != QR_OK) return 0;
  if (len != 1200) return 0;
  /* A client CHLO is not a server response. */
  if (qr_decode_server_response(buf, len, &json) != QR_OK) return 0;
  ok = strstr(json, "\"kind\"") != NULL;
  qr_string_free(json);
  return ok;
}
