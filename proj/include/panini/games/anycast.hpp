#pragma once

// Anycast protocols as black boxes for the security games.

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "panini/net/network.hpp"
#include "panini/protocol/simulation.hpp"

namespace panini::games {

using net::UserId;
using protocol::AnycastRequest;

struct Execution {
  std::set<UserId> actual;     // U_a, ground truth
  net::Transcript transcript;  // everything the adversary gets to see
  protocol::Outcome outcome = protocol::Outcome::Delivered;
};

class AnycastProtocol {
 public:
  virtual ~AnycastProtocol() = default;
  virtual std::string name() const = 0;
  /// Runs the request with the given users corrupted. Corrupted parties
  /// follow the protocol and leak their state into the transcript.
  virtual Execution execute(const AnycastRequest& req, const net::CorruptionSet& corrupted, std::uint64_t seed) = 0;
};

/// F_anycast: a uniformly random n-subset of the possible receivers.
/// Throws std::invalid_argument unless 1 <= n <= |possible|.
std::set<UserId> ideal_anycast(const AnycastRequest& req, Rng& rng);

std::unique_ptr<AnycastProtocol> make_panini(net::NetworkConfig network = {});
/// Reveals nothing at all; the reference every real protocol is measured against.
std::unique_ptr<AnycastProtocol> make_ideal();

/// Deliberately broken variants of Panini:
///   p1  publishes the message after delivery
///   p2  always picks the keys of the first n members of U_p
///   p5  publishes the chosen receivers after delivery
/// make_protocol also accepts "panini" and "ideal". Throws
/// std::invalid_argument on unknown names.
std::unique_ptr<AnycastProtocol> make_protocol(std::string_view name);
std::vector<std::string> protocol_names();

}  // namespace panini::games
