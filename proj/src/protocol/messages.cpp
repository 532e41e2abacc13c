#include "panini/protocol/messages.hpp"

#include <algorithm>

namespace panini::protocol {

std::string_view to_string(MessageKind k) {
  switch (k) {
    case MessageKind::KeyReq: return "KeyReq";
    case MessageKind::VkSubmit: return "VkSubmit";
    case MessageKind::RingAnnounce: return "RingAnnounce";
    case MessageKind::KeySubmit: return "KeySubmit";
    case MessageKind::CiphertextMsg: return "CiphertextMsg";
  }
  return "unknown";
}

MessageKind kind_of(const ProtocolMessage& m) {
  return static_cast<MessageKind>(m.index() + 1);
}

namespace {

struct Encoder {
  ByteWriter& w;
  void operator()(const KeyReq& m) const { w.field(m.hello).field(m.pp); }
  void operator()(const VkSubmit& m) const { w.field(m.vk.bytes); }
  void operator()(const RingAnnounce& m) const { w.field(m.ring); }
  void operator()(const KeySubmit& m) const { w.field(m.key.bytes).field(m.signature); }
  void operator()(const CiphertextMsg& m) const { w.field(m.ciphertext.serialize()); }
};

template <std::size_t N>
std::array<std::uint8_t, N> fixed(ByteView b) {
  if (b.size() != N) throw DecodeError("fixed-size field has wrong length");
  std::array<std::uint8_t, N> out{};
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

}  // namespace

Bytes encode(const ProtocolMessage& m) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(kind_of(m)));
  std::visit(Encoder{w}, m);
  return std::move(w).take();
}

ProtocolMessage decode(ByteView bytes) {
  ByteReader r(bytes);
  const auto kind = static_cast<MessageKind>(r.u8());
  ProtocolMessage out;
  switch (kind) {
    case MessageKind::KeyReq: {
      KeyReq m;
      m.hello = fixed<kRunIdBytes>(r.field(kRunIdBytes));
      ByteView pp = r.field();
      m.pp.assign(pp.begin(), pp.end());
      out = std::move(m);
      break;
    }
    case MessageKind::VkSubmit: {
      // Point validity is checked by whoever uses the key.
      VkSubmit m;
      m.vk.bytes = fixed<lrs::kPointBytes>(r.field(lrs::kPointBytes));
      out = m;
      break;
    }
    case MessageKind::RingAnnounce: {
      ByteView ring = r.field();
      out = RingAnnounce{Bytes(ring.begin(), ring.end())};
      break;
    }
    case MessageKind::KeySubmit: {
      KeySubmit m;
      m.key.bytes = fixed<cipher::kKeyBytes>(r.field(cipher::kKeyBytes));
      ByteView sig = r.field();
      m.signature.assign(sig.begin(), sig.end());
      out = std::move(m);
      break;
    }
    case MessageKind::CiphertextMsg: {
      out = CiphertextMsg{cipher::Ciphertext::deserialize(r.field())};
      break;
    }
    default:
      throw DecodeError("unknown message kind");
  }
  r.expect_done();
  return out;
}

}  // namespace panini::protocol
