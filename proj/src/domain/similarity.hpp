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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qr::domain {

struct PageMetrics {
  std::int64_t elements = 0;     // start tags
  std::int64_t anchors = 0;      // <a>
  std::int64_t images = 0;       // <img>
  std::int64_t scripts = 0;      // <script>
  std::string title;             // whitespace-collapsed <title> text
  std::int64_t text_length = 0;  // non-whitespace characters outside markup, script, style, title
};

// Lenient tokenizer; never fails on malformed markup.
PageMetrics analyze_page(std::string_view html);

// Counts agree when |a-b| <= 2 for max(a,b) < 20, otherwise within 10% of max.
bool counts_agree(std::int64_t a, std::int64_t b);

struct MetricComparison {
  std::string name;
  std::string value_a;
  std::string value_b;
  bool agrees = false;
};

struct SimilarityReport {
  std::vector<MetricComparison> metrics;  // elements, anchors, images, scripts, title, text_length
  bool similar = false;                   // more than 3 agree

  int agreeing() const;
};

SimilarityReport compare_landing_pages(std::string_view html_a, std::string_view html_b);

}  // namespace qr::domain
