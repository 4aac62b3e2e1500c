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

#include <stdexcept>
#include <string>

namespace qr {

// Numeric values are shared with the C API (qr_status), keep them stable.
enum class Errc : int {
  InvalidArgument = 1,
  UnsortedTags = 2,
  OversizeValue = 3,
  Truncated = 4,
  NonMonotonicOffsets = 5,
  UnknownLayout = 6,
  PadTooSmall = 7,
  Blocklisted = 8,
  SocketError = 9,
  ParseError = 10,
  BindFailed = 11,
  ConnectFailed = 12,
  TlsFailed = 13,
  ConfigInvalid = 14,
  ResumeDigestMismatch = 15,
  MalformedRecord = 16,
  IoError = 17,
  UnsupportedCompression = 18,
  Interrupted = 19,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace qr
