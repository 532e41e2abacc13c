#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "panini/common/bytes.hpp"
#include "panini/common/hash.hpp"

namespace panini::net {

using Tick = std::uint64_t;

struct UserId {
  std::uint32_t value = 0;

  friend auto operator<=>(const UserId&, const UserId&) = default;
};

inline std::string to_string(UserId u) { return std::to_string(u.value); }

enum class Channel : std::uint8_t { Auth, Anon };

std::string_view to_string(Channel c);

using MacTag = Digest256;

/// A message in flight. The integrity token exists only on the authenticated
/// channel; the label names the protocol step the traffic belongs to (which a
/// global observer can infer from the protocol's public message flow).
struct Envelope {
  std::uint64_t id = 0;
  UserId origin;
  UserId destination;
  Bytes payload;
  Tick submit_time = 0;
  Channel channel = Channel::Auth;
  std::optional<MacTag> integrity;
  std::string label;
};

struct Delivery {
  Tick time = 0;
  Channel channel = Channel::Auth;
  UserId destination;
  std::optional<UserId> origin;  // known only on the authenticated channel
  Bytes payload;
  std::string label;
  std::uint64_t envelope_id = 0;
};

/// Users whose internal state streams to the adversary. They still follow
/// the protocol (honest but curious).
struct CorruptionSet {
  std::set<UserId> users;

  bool contains(UserId u) const { return users.count(u) != 0; }
  bool empty() const { return users.empty(); }
};

}  // namespace panini::net
