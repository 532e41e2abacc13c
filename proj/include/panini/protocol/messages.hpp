#pragma once

// Wire format: 1-byte kind || length-prefixed fields.

#include <array>
#include <cstdint>
#include <string_view>
#include <variant>

#include "panini/common/bytes.hpp"
#include "panini/crypto/cipher.hpp"
#include "panini/crypto/lrs.hpp"

namespace panini::protocol {

inline constexpr std::size_t kRunIdBytes = 16;
using RunId = std::array<std::uint8_t, kRunIdBytes>;

enum class MessageKind : std::uint8_t {
  KeyReq = 1,
  VkSubmit = 2,
  RingAnnounce = 3,
  KeySubmit = 4,
  CiphertextMsg = 5,
};

std::string_view to_string(MessageKind k);

/// P0: announces the run. `hello` is a fresh run identifier. pp stays as raw
/// bytes so a receiver can reject malformed parameters itself.
struct KeyReq {
  RunId hello{};
  Bytes pp;
};

struct VkSubmit {
  lrs::VerificationKey vk;
};

struct RingAnnounce {
  Bytes ring;  // lrs::Ring::serialize()
};

/// P1, anonymous channel: an ephemeral key and a ring signature over its bytes.
struct KeySubmit {
  cipher::SymmetricKey key;
  Bytes signature;  // lrs::Signature::serialize()
};

struct CiphertextMsg {
  cipher::Ciphertext ciphertext;
};

using ProtocolMessage = std::variant<KeyReq, VkSubmit, RingAnnounce, KeySubmit, CiphertextMsg>;

MessageKind kind_of(const ProtocolMessage& m);
Bytes encode(const ProtocolMessage& m);
/// Throws DecodeError on unknown kinds, truncation or trailing bytes.
ProtocolMessage decode(ByteView bytes);

}  // namespace panini::protocol
