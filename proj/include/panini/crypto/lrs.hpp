#pragma once

// Linkable ring signatures (LSAG family) over NIST P-256.
//
// A signature proves knowledge of x with vk = x*G for some vk in the ring,
// and carries the key image I = x*H where H is a fixed generator with no
// known discrete log relative to G. I depends only on x, so two signatures
// by the same secret key link regardless of message or ring.

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "panini/common/bytes.hpp"
#include "panini/common/rng.hpp"

namespace panini::lrs {

inline constexpr unsigned kSecurityBits = 128;
inline constexpr std::size_t kPointBytes = 33;   // SEC1 compressed
inline constexpr std::size_t kScalarBytes = 32;

class UnsupportedSecurityLevel : public std::invalid_argument {
 public:
  explicit UnsupportedSecurityLevel(unsigned bits)
      : std::invalid_argument("unsupported security level: " + std::to_string(bits) + " bits") {}
};

class SignerNotInRing : public std::invalid_argument {
 public:
  SignerNotInRing() : std::invalid_argument("signer's verification key is not a ring member") {}
};

/// Empty ring, duplicate member, or a member that is not a valid group element.
class InvalidRing : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PublicParams {
  std::string group = "P-256";
  std::string hash = "SHA-512";
  std::string domain = "panini-lrs-v1";
  unsigned security_bits = kSecurityBits;

  /// True iff these are the only parameters this implementation speaks.
  bool supported() const;

  Bytes serialize() const;
  static PublicParams deserialize(ByteView bytes);

  friend bool operator==(const PublicParams&, const PublicParams&) = default;
};

/// Sig.Setup. Only the 128-bit level exists.
PublicParams setup(unsigned security_bits);

using Scalar = std::array<std::uint8_t, kScalarBytes>;
using KeyImage = std::array<std::uint8_t, kPointBytes>;

struct VerificationKey {
  std::array<std::uint8_t, kPointBytes> bytes{};

  /// Throws DecodeError unless bytes encode a valid, non-identity point.
  static VerificationKey from_bytes(ByteView bytes);
  std::string hex() const { return to_hex(bytes); }

  friend auto operator<=>(const VerificationKey&, const VerificationKey&) = default;
};

class SecretKey {
 public:
  SecretKey() = default;
  explicit SecretKey(const Scalar& s) : scalar_(s) {}
  ~SecretKey();
  SecretKey(const SecretKey&) = default;
  SecretKey& operator=(const SecretKey&) = default;

  const Scalar& scalar() const { return scalar_; }
  /// Hex dump; only for honest-but-curious state leaks in the simulator.
  std::string hex() const { return to_hex(scalar_); }
  static SecretKey from_hex(std::string_view hex);

  friend bool operator==(const SecretKey&, const SecretKey&) = default;

 private:
  Scalar scalar_{};
};

struct KeyPair {
  VerificationKey vk;
  SecretKey sk;
};

/// Sig.KeyGen.
KeyPair keygen(const PublicParams& pp, Rng& rng);
/// The fixed-base exponentiation sk -> vk.
VerificationKey public_key(const SecretKey& sk);

namespace detail {
struct DecodedRing;
}

/// A set of verification keys in canonical order (ascending byte encoding),
/// so the order in which members were collected is not recoverable.
class Ring {
 public:
  /// Throws InvalidRing on empty input, duplicates or invalid points.
  explicit Ring(std::vector<VerificationKey> members);

  const std::vector<VerificationKey>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(const VerificationKey& vk) const;
  /// Position of vk in canonical order, or size() if absent.
  std::size_t index_of(const VerificationKey& vk) const;

  Bytes serialize() const;
  /// Throws DecodeError on malformed bytes, InvalidRing on invariant violation.
  static Ring deserialize(ByteView bytes);

  friend bool operator==(const Ring& a, const Ring& b) { return a.members_ == b.members_; }

  const detail::DecodedRing& decoded() const { return *decoded_; }

 private:
  std::vector<VerificationKey> members_;
  std::shared_ptr<const detail::DecodedRing> decoded_;
};

struct Signature {
  KeyImage key_image{};
  Scalar challenge{};             // c_0, the challenge entering position 0
  std::vector<Scalar> responses;  // s_0 .. s_{l-1}

  /// key_image || challenge || u32 l || l responses. Size 69 + 32*l.
  Bytes serialize() const;
  static Signature deserialize(ByteView bytes);

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Sig.Sign. Throws SignerNotInRing if public_key(sk) is not a member.
Signature sign(const SecretKey& sk, ByteView msg, const Ring& ring, Rng& rng);

/// Sig.Verify. Never throws: anything malformed is a reject.
bool verify(const Signature& sig, ByteView msg, const Ring& ring);
bool verify(ByteView sig_bytes, ByteView msg, const Ring& ring);

/// Sig.Link: equal key images. Malformed input does not link.
bool link(const Signature& a, const Signature& b);
bool link(ByteView a, ByteView b);

}  // namespace panini::lrs
