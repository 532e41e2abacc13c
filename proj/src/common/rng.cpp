#include "panini/common/rng.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

#include "panini/common/hash.hpp"

namespace panini {

struct Rng::Stream {
  EVP_CIPHER_CTX* ctx = nullptr;
  ~Stream() { EVP_CIPHER_CTX_free(ctx); }
};

namespace {
Rng::Key seed_key(std::uint64_t seed) {
  ByteWriter w;
  w.u64(seed);
  static constexpr std::string_view kLabel = "panini/rng/seed";
  return sha256({ByteView(reinterpret_cast<const std::uint8_t*>(kLabel.data()), kLabel.size()),
                 as_view(w.bytes())});
}
}  // namespace

Rng::Rng(std::uint64_t seed) : Rng(seed_key(seed)) {}

Rng::Rng(const Key& key) : key_(key), stream_(std::make_unique<Stream>()) {
  stream_->ctx = EVP_CIPHER_CTX_new();
  std::array<std::uint8_t, 16> iv{};
  if (stream_->ctx == nullptr ||
      EVP_EncryptInit_ex(stream_->ctx, EVP_aes_256_ctr(), nullptr, key_.data(), iv.data()) != 1)
    throw std::runtime_error("rng: cipher init failed");
}

Rng::~Rng() = default;
Rng::Rng(Rng&&) noexcept = default;
Rng& Rng::operator=(Rng&&) noexcept = default;

void Rng::refill() {
  static const std::array<std::uint8_t, 4096> kZeros{};
  int len = 0;
  EVP_EncryptUpdate(stream_->ctx, buffer_.data(), &len, kZeros.data(), static_cast<int>(kZeros.size()));
  pos_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buffer_.size()) refill();
    std::size_t n = std::min(out.size() - done, buffer_.size() - pos_);
    std::memcpy(out.data() + done, buffer_.data() + pos_, n);
    pos_ += n;
    done += n;
  }
}

Bytes Rng::bytes(std::size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

std::uint64_t Rng::next_u64() {
  std::array<std::uint8_t, 8> b{};
  fill(b);
  std::uint64_t v = 0;
  for (std::uint8_t x : b) v = (v << 8) | x;
  return v;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::uniform: bound must be positive");
  // Rejection sampling keeps the result unbiased.
  const std::uint64_t limit = max() - (max() % bound + 1) % bound;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v <= limit) return v % bound;
  }
}

Rng Rng::derive(std::string_view label, std::uint64_t index) const {
  ByteWriter w;
  w.u64(index);
  static constexpr std::string_view kLabel = "panini/rng/derive";
  return Rng(sha256({ByteView(reinterpret_cast<const std::uint8_t*>(kLabel.data()), kLabel.size()),
                     ByteView(key_),
                     ByteView(reinterpret_cast<const std::uint8_t*>(label.data()), label.size()),
                     as_view(w.bytes())}));
}

}  // namespace panini
