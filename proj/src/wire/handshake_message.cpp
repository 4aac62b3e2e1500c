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

#include "wire/handshake_message.hpp"

#include <algorithm>
#include <limits>

namespace qr::wire {

const Bytes* HandshakeMessage::find(Tag tag) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), tag,
                             [](const HandshakeEntry& e, Tag t) { return e.tag < t; });
  if (it != entries.end() && it->tag == tag) return &it->value;
  // Unsorted messages (built by hand) still answer lookups.
  for (const auto& e : entries)
    if (e.tag == tag) return &e.value;
  return nullptr;
}

void HandshakeMessage::set(Tag tag, Bytes value) {
  auto it = std::lower_bound(entries.begin(), entries.end(), tag,
                             [](const HandshakeEntry& e, Tag t) { return e.tag < t; });
  if (it != entries.end() && it->tag == tag) {
    it->value = std::move(value);
  } else {
    entries.insert(it, HandshakeEntry{tag, std::move(value)});
  }
}

void HandshakeMessage::erase(Tag tag) {
  std::erase_if(entries, [tag](const HandshakeEntry& e) { return e.tag == tag; });
}

Bytes encode_handshake_message(const HandshakeMessage& m) {
  if (m.entries.size() > std::numeric_limits<std::uint16_t>::max())
    fail(Errc::OversizeValue, "more than 65535 entries");
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    if (i > 0 && !(m.entries[i - 1].tag < m.entries[i].tag))
      fail(Errc::UnsortedTags, "tag " + m.entries[i].tag.name() + " does not ascend after " + m.entries[i - 1].tag.name());
    total += m.entries[i].value.size();
  }
  if (total > std::numeric_limits<std::uint32_t>::max()) fail(Errc::OversizeValue, "value region exceeds 2^32-1 octets");

  ByteWriter w;
  w.u32(m.message_tag.value);
  w.u16(static_cast<std::uint16_t>(m.entries.size()));
  w.u16(0);
  std::uint32_t end = 0;
  for (const auto& e : m.entries) {
    end += static_cast<std::uint32_t>(e.value.size());
    w.u32(e.tag.value);
    w.u32(end);
  }
  for (const auto& e : m.entries) w.raw(e.value);
  return w.take();
}

HandshakeMessage decode_handshake_message(ByteView data) {
  ByteReader r(data);
  HandshakeMessage m;
  m.message_tag = Tag{r.u32()};
  std::uint16_t count = r.u16();
  if (r.u16() != 0) fail(Errc::UnknownLayout, "non-zero padding after entry count");

  struct Index {
    Tag tag;
    std::uint32_t end;
  };
  std::vector<Index> index;
  index.reserve(count);
  std::uint32_t prev_end = 0;
  for (std::uint16_t i = 0; i < count; ++i) {
    Index ix{Tag{r.u32()}, r.u32()};
    if (ix.end < prev_end) fail(Errc::NonMonotonicOffsets, "end offset decreases at entry " + std::to_string(i));
    if (!index.empty() && !(index.back().tag < ix.tag))
      fail(Errc::UnknownLayout, "tags not strictly ascending at entry " + std::to_string(i));
    prev_end = ix.end;
    index.push_back(ix);
  }
  auto values = r.take(prev_end);
  if (!r.empty()) fail(Errc::UnknownLayout, std::to_string(r.remaining()) + " trailing octets");

  m.entries.reserve(count);
  std::uint32_t start = 0;
  for (const auto& ix : index) {
    auto v = values.subspan(start, ix.end - start);
    m.entries.push_back(HandshakeEntry{ix.tag, Bytes(v.begin(), v.end())});
    start = ix.end;
  }
  return m;
}

}  // namespace qr::wire
