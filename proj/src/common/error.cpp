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

#include "common/error.hpp"

namespace qr {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::UnsortedTags: return "UnsortedTags";
    case Errc::OversizeValue: return "OversizeValue";
    case Errc::Truncated: return "Truncated";
    case Errc::NonMonotonicOffsets: return "NonMonotonicOffsets";
    case Errc::UnknownLayout: return "UnknownLayout";
    case Errc::PadTooSmall: return "PadTooSmall";
    case Errc::Blocklisted: return "Blocklisted";
    case Errc::SocketError: return "SocketError";
    case Errc::ParseError: return "ParseError";
    case Errc::BindFailed: return "BindFailed";
    case Errc::ConnectFailed: return "ConnectFailed";
    case Errc::TlsFailed: return "TlsFailed";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::ResumeDigestMismatch: return "ResumeDigestMismatch";
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::IoError: return "IoError";
    case Errc::UnsupportedCompression: return "UnsupportedCompression";
    case Errc::Interrupted: return "Interrupted";
  }
  return "Unknown";
}

}  // namespace qr
