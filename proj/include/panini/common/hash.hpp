#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

#include "panini/common/bytes.hpp"

namespace panini {

using Digest256 = std::array<std::uint8_t, 32>;

/// SHA-256 over the concatenation of parts.
Digest256 sha256(std::initializer_list<ByteView> parts);

/// HMAC-SHA-256.
Digest256 hmac_sha256(ByteView key, ByteView data);

}  // namespace panini
