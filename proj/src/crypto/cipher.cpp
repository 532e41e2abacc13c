#include "panini/crypto/cipher.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <limits>
#include <memory>
#include <stdexcept>

namespace panini::cipher {

namespace {

struct CtxFree {
  void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};

// CTR mode is its own inverse.
Bytes ctr_xor(ByteView in, const SymmetricKey& key, const std::array<std::uint8_t, kNonceBytes>& nonce) {
  if (in.size() > static_cast<std::size_t>(std::numeric_limits<int>::max()))
    throw std::length_error("cipher: input too large");
  std::unique_ptr<EVP_CIPHER_CTX, CtxFree> ctx(EVP_CIPHER_CTX_new());
  if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_ctr(), nullptr, key.bytes.data(), nonce.data()) != 1)
    throw std::runtime_error("cipher: init failed");
  Bytes out(in.size());
  int len = 0;
  if (!in.empty() &&
      EVP_EncryptUpdate(ctx.get(), out.data(), &len, in.data(), static_cast<int>(in.size())) != 1)
    throw std::runtime_error("cipher: update failed");
  return out;
}

}  // namespace

SymmetricKey SymmetricKey::from_bytes(ByteView b) {
  if (b.size() != kKeyBytes) throw DecodeError("symmetric key must be 32 bytes");
  SymmetricKey k;
  std::copy(b.begin(), b.end(), k.bytes.begin());
  return k;
}

Bytes Ciphertext::serialize() const {
  ByteWriter w;
  w.field(nonce).field(body);
  return std::move(w).take();
}

Ciphertext Ciphertext::deserialize(ByteView bytes) {
  ByteReader r(bytes);
  Ciphertext ct;
  ByteView n = r.field(kNonceBytes);
  if (n.size() != kNonceBytes) throw DecodeError("bad nonce length");
  std::copy(n.begin(), n.end(), ct.nonce.begin());
  ByteView b = r.field();
  ct.body.assign(b.begin(), b.end());
  r.expect_done();
  return ct;
}

SymmetricKey keygen(Rng& rng) {
  SymmetricKey k;
  rng.fill(k.bytes);
  return k;
}

Ciphertext encrypt(const TaggedPlaintext& pt, const SymmetricKey& key, Rng& rng) {
  Ciphertext ct;
  rng.fill(ct.nonce);
  Bytes plain;
  plain.reserve(kTagBytes + pt.message.size());
  plain.insert(plain.end(), pt.tag.begin(), pt.tag.end());
  plain.insert(plain.end(), pt.message.begin(), pt.message.end());
  ct.body = ctr_xor(plain, key, ct.nonce);
  return ct;
}

TaggedPlaintext decrypt(const Ciphertext& ct, const SymmetricKey& key) {
  Bytes plain = ctr_xor(ct.body, key, ct.nonce);
  TaggedPlaintext out;
  out.tag.fill(0);
  const std::size_t tag_len = std::min(plain.size(), kTagBytes);
  std::copy_n(plain.begin(), tag_len, out.tag.begin());
  out.message.assign(plain.begin() + static_cast<std::ptrdiff_t>(tag_len), plain.end());
  return out;
}

}  // namespace panini::cipher
