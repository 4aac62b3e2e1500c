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

#include "wire/server_config.hpp"

namespace qr::wire {

namespace {

Bytes tag_list(const std::vector<Tag>& list) {
  ByteWriter w;
  for (auto t : list) w.u32(t.value);
  return w.take();
}

std::vector<Tag> parse_tag_list(const Bytes& v, const char* what) {
  if (v.size() % 4 != 0) fail(Errc::ParseError, std::string(what) + " is not a multiple of 4 octets");
  ByteReader r(v);
  std::vector<Tag> out;
  while (!r.empty()) out.push_back(Tag{r.u32()});
  return out;
}

const Bytes& require(const HandshakeMessage& m, Tag t) {
  const Bytes* v = m.find(t);
  if (!v) fail(Errc::ParseError, "SCFG lacks " + t.name());
  return *v;
}

}  // namespace

HandshakeMessage server_config_message(const ServerConfig& c) {
  if (c.pubs.size() != c.kexs.size()) fail(Errc::InvalidArgument, "PUBS and KEXS differ in length");
  if (c.expy == 0) fail(Errc::InvalidArgument, "EXPY must be positive");

  HandshakeMessage m;
  m.message_tag = tags::SCFG;
  m.set(tags::AEAD, tag_list(c.aead));
  ByteWriter expy;
  expy.u64(c.expy);
  m.set(tags::EXPY, expy.take());
  m.set(tags::KEXS, tag_list(c.kexs));
  ByteWriter pubs;
  for (const auto& p : c.pubs) {
    if (p.size() > 0xffffff) fail(Errc::InvalidArgument, "public value exceeds 2^24-1 octets");
    pubs.u24(static_cast<std::uint32_t>(p.size()));
    pubs.raw(p);
  }
  m.set(tags::PUBS, pubs.take());
  m.set(tags::SCID, Bytes(c.scid.begin(), c.scid.end()));
  ByteWriter vers;
  for (const auto& v : c.vers) vers.raw(v.bytes());
  m.set(tags::VER, vers.take());
  return m;
}

Bytes encode_server_config(const ServerConfig& c) { return encode_handshake_message(server_config_message(c)); }

ServerConfig server_config_from_message(const HandshakeMessage& m) {
  if (m.message_tag != tags::SCFG) fail(Errc::ParseError, "message tag is " + m.message_tag.name() + ", not SCFG");
  ServerConfig c;
  const auto& scid = require(m, tags::SCID);
  if (scid.size() != c.scid.size()) fail(Errc::ParseError, "SCID must be 16 octets");
  std::copy(scid.begin(), scid.end(), c.scid.begin());
  c.kexs = parse_tag_list(require(m, tags::KEXS), "KEXS");
  c.aead = parse_tag_list(require(m, tags::AEAD), "AEAD");

  const auto& expy = require(m, tags::EXPY);
  if (expy.size() != 8) fail(Errc::ParseError, "EXPY must be 8 octets");
  c.expy = ByteReader(expy).u64();
  if (c.expy == 0) fail(Errc::ParseError, "EXPY is zero");

  try {
    ByteReader r(require(m, tags::PUBS));
    while (!r.empty()) {
      auto len = r.u24();
      auto v = r.take(len);
      c.pubs.emplace_back(v.begin(), v.end());
    }
  } catch (const Error& e) {
    if (e.code() == Errc::Truncated) fail(Errc::ParseError, "PUBS entry truncated");
    throw;
  }
  if (c.pubs.size() != c.kexs.size()) fail(Errc::ParseError, "PUBS and KEXS differ in length");

  if (const Bytes* vers = m.find(tags::VER)) {
    if (vers->size() % 4 != 0) fail(Errc::ParseError, "VER is not a multiple of 4 octets");
    for (std::size_t i = 0; i < vers->size(); i += 4)
      c.vers.emplace_back(std::array<std::uint8_t, 4>{(*vers)[i], (*vers)[i + 1], (*vers)[i + 2], (*vers)[i + 3]});
  }
  return c;
}

ServerConfig decode_server_config(ByteView data) {
  HandshakeMessage m;
  try {
    m = decode_handshake_message(data);
  } catch (const Error& e) {
    fail(Errc::ParseError, std::string("SCFG framing: ") + e.what());
  }
  return server_config_from_message(m);
}

}  // namespace qr::wire
