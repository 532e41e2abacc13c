#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <string_view>

#include "panini/common/bytes.hpp"

namespace panini {

/// Deterministic random generator: AES-256-CTR keystream under a key derived
/// from the seed. Every random choice in the simulator, protocol and games is
/// drawn from one of these, so a seed fixes an entire run.
///
/// Satisfies UniformRandomBitGenerator. Not copyable: use derive() to split
/// independent streams.
class Rng {
 public:
  using result_type = std::uint64_t;
  using Key = std::array<std::uint8_t, 32>;

  explicit Rng(std::uint64_t seed);
  explicit Rng(const Key& key);
  ~Rng();
  Rng(Rng&&) noexcept;
  Rng& operator=(Rng&&) noexcept;
  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;

  void fill(std::span<std::uint8_t> out);
  Bytes bytes(std::size_t n);
  std::uint64_t next_u64();
  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform(std::uint64_t bound);
  bool coin() { return (next_u64() & 1) != 0; }

  /// Independent child stream; does not consume output from this one.
  Rng derive(std::string_view label, std::uint64_t index = 0) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

 private:
  void refill();

  Key key_{};
  struct Stream;
  std::unique_ptr<Stream> stream_;
  std::array<std::uint8_t, 4096> buffer_{};
  std::size_t pos_ = buffer_.size();
};

}  // namespace panini
