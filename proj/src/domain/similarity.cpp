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

#include "domain/similarity.hpp"

#include <algorithm>
#include <cctype>

#include "common/text.hpp"

namespace qr::domain {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

std::size_t find_ci(std::string_view hay, std::string_view needle, std::size_t from) {
  if (needle.size() > hay.size()) return std::string_view::npos;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i)
    if (iequals(hay.substr(i, needle.size()), needle)) return i;
  return std::string_view::npos;
}

// Index just past the '>' closing a tag that starts at `i`, honouring quoted
// attribute values.
std::size_t skip_tag(std::string_view s, std::size_t i) {
  char quote = 0;
  for (; i < s.size(); ++i) {
    if (quote) {
      if (s[i] == quote) quote = 0;
    } else if (s[i] == '"' || s[i] == '\'') {
      quote = s[i];
    } else if (s[i] == '>') {
      return i + 1;
    }
  }
  return s.size();
}

std::int64_t count_text(std::string_view s) {
  return std::count_if(s.begin(), s.end(), [](char c) { return !is_space(c); });
}

std::string collapse(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : trim(s)) {
    if (is_space(c)) {
      space = true;
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

}  // namespace

PageMetrics analyze_page(std::string_view s) {
  PageMetrics m;
  std::size_t i = 0;
  std::size_t text_start = 0;
  while (i < s.size()) {
    if (s[i] != '<') {
      ++i;
      continue;
    }
    std::size_t lt = i;
    auto rest = s.substr(i);
    bool markup = false;
    if (rest.starts_with("<!--")) {
      auto end = s.find("-->", i + 4);
      i = end == std::string_view::npos ? s.size() : end + 3;
      markup = true;
    } else if (rest.size() > 1 && (rest[1] == '!' || rest[1] == '?')) {
      i = skip_tag(s, i + 2);
      markup = true;
    } else if (rest.size() > 2 && rest[1] == '/' && is_alpha(rest[2])) {
      i = skip_tag(s, i + 2);
      markup = true;
    } else if (rest.size() > 1 && is_alpha(rest[1])) {
      std::size_t n = i + 1;
      while (n < s.size() && (std::isalnum(static_cast<unsigned char>(s[n])) || s[n] == '-' || s[n] == ':')) ++n;
      std::string name = to_lower(s.substr(i + 1, n - i - 1));
      i = skip_tag(s, n);
      ++m.elements;
      if (name == "a") ++m.anchors;
      if (name == "img") ++m.images;
      if (name == "script") ++m.scripts;
      markup = true;
      if (name == "script" || name == "style" || name == "title") {
        m.text_length += count_text(s.substr(text_start, lt - text_start));
        auto close = find_ci(s, "</" + name, i);
        auto content_end = close == std::string_view::npos ? s.size() : close;
        if (name == "title" && m.title.empty()) m.title = collapse(s.substr(i, content_end - i));
        i = close == std::string_view::npos ? s.size() : skip_tag(s, close + 2);
        text_start = i;
        continue;
      }
    }
    if (markup) {
      m.text_length += count_text(s.substr(text_start, lt - text_start));
      text_start = i;
    } else {
      ++i;  // a bare '<' is text
    }
  }
  m.text_length += count_text(s.substr(text_start));
  return m;
}

bool counts_agree(std::int64_t a, std::int64_t b) {
  auto hi = std::max(a, b);
  auto diff = hi - std::min(a, b);
  return hi < 20 ? diff <= 2 : diff * 10 <= hi;
}

int SimilarityReport::agreeing() const {
  return static_cast<int>(std::count_if(metrics.begin(), metrics.end(), [](const auto& m) { return m.agrees; }));
}

SimilarityReport compare_landing_pages(std::string_view html_a, std::string_view html_b) {
  auto a = analyze_page(html_a);
  auto b = analyze_page(html_b);
  SimilarityReport r;
  auto numeric = [&](const char* name, std::int64_t x, std::int64_t y) {
    r.metrics.push_back({name, std::to_string(x), std::to_string(y), counts_agree(x, y)});
  };
  numeric("elements", a.elements, b.elements);
  numeric("anchors", a.anchors, b.anchors);
  numeric("images", a.images, b.images);
  numeric("scripts", a.scripts, b.scripts);
  r.metrics.push_back({"title", a.title, b.title, a.title == b.title});
  numeric("text_length", a.text_length, b.text_length);
  r.similar = r.agreeing() > 3;
  return r;
}

}  // namespace qr::domain
