#pragma once

// Symmetric encryption with an in-plaintext selection tag.
//
// AES-256-CTR: decryption under any key always yields some plaintext, and the
// receiver learns whether the key was the right one only by comparing the
// decrypted tag against kTag.

#include <array>
#include <compare>
#include <cstdint>

#include "panini/common/bytes.hpp"
#include "panini/common/rng.hpp"

namespace panini::cipher {

inline constexpr std::size_t kKeyBytes = 32;
inline constexpr std::size_t kNonceBytes = 16;
inline constexpr std::size_t kTagBytes = 16;

using Tag = std::array<std::uint8_t, kTagBytes>;

/// "PANINI-TAG-00001"
inline constexpr Tag kTag = {'P', 'A', 'N', 'I', 'N', 'I', '-', 'T', 'A', 'G', '-', '0', '0', '0', '0', '1'};

struct SymmetricKey {
  std::array<std::uint8_t, kKeyBytes> bytes{};

  static SymmetricKey from_bytes(ByteView b);
  std::string hex() const { return to_hex(bytes); }

  friend auto operator<=>(const SymmetricKey&, const SymmetricKey&) = default;
};

struct TaggedPlaintext {
  Tag tag = kTag;
  Bytes message;

  bool tag_matches() const { return tag == kTag; }

  friend bool operator==(const TaggedPlaintext&, const TaggedPlaintext&) = default;
};

inline TaggedPlaintext tagged(Bytes message) { return TaggedPlaintext{kTag, std::move(message)}; }

struct Ciphertext {
  std::array<std::uint8_t, kNonceBytes> nonce{};
  Bytes body;  // |tag| + |message| bytes

  /// Length-prefixed nonce || length-prefixed body.
  Bytes serialize() const;
  static Ciphertext deserialize(ByteView bytes);

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

/// Cipher.KeyGen: 32 bytes from rng.
SymmetricKey keygen(Rng& rng);

/// Cipher.Enc with a fresh random nonce.
Ciphertext encrypt(const TaggedPlaintext& pt, const SymmetricKey& key, Rng& rng);

/// Cipher.Dec. Total: always returns a candidate. Bodies shorter than the tag
/// yield a zero-padded tag, which never matches kTag.
TaggedPlaintext decrypt(const Ciphertext& ct, const SymmetricKey& key);

}  // namespace panini::cipher
