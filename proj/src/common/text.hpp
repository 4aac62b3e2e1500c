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

#include <string>
#include <string_view>
#include <vector>

namespace qr {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
bool iequals(std::string_view a, std::string_view b);
bool ends_with_ci(std::string_view s, std::string_view suffix);

// Shell-style match where '*' spans any run of characters, case-insensitive.
bool glob_match_ci(std::string_view pattern, std::string_view text);

std::string read_file(const std::string& path);
// Lines with trailing CR stripped; blank lines and '#' comments dropped.
std::vector<std::string> read_config_lines(const std::string& path);
std::vector<std::string> config_lines(std::string_view text);
// Writes to path.tmp then renames over path.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace qr
