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
#include <string>
#include <string_view>

namespace qr {

using SystemTime = std::chrono::system_clock::time_point;
using SteadyTime = std::chrono::steady_clock::time_point;
using Millis = std::chrono::duration<double, std::milli>;

// "2017-10-06T14:00:00.123Z"
std::string iso8601_utc(SystemTime t);
// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS[.frac][Z]". Throws ParseError.
SystemTime parse_iso8601_utc(std::string_view text);

std::int64_t to_unix_micros(SystemTime t);
SystemTime from_unix_micros(std::int64_t us);

}  // namespace qr
