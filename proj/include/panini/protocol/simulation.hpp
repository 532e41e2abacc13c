#pragma once

// Runs one anycast over the simulated network and reports what happened.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string_view>

#include "json.hpp"
#include "panini/net/network.hpp"
#include "panini/protocol/parties.hpp"

namespace panini::protocol {

/// Terminal state of a run. Each has its own process exit code.
enum class Outcome {
  Delivered,
  InvalidSignature,
  DuplicateKey,
  LinkedKeys,
  Timeout,
  AuthRejected,  // stalled after the auth channel rejected tampered traffic
  InconsistentPeer,
  DuplicateVerificationKey,
  ExcessKeys,
  Stalled,  // the network went quiet before the run completed
};

std::string_view to_string(Outcome o);
int exit_code(Outcome o);
Outcome outcome_of(AbortReason r);

struct RunOptions {
  net::NetworkConfig network;
  /// Sender's wait for keys after announcing the ring; 0 means 2T. The anon
  /// batch lands at the earliest T+1 ticks after the announcement, so the
  /// budget has to cover one full mix round.
  Tick key_timeout = 0;
  net::CorruptionSet corrupted;
  KeySelector selector;                 // empty: uniform
  net::Adversary* adversary = nullptr;  // non-owning
  std::uint64_t seed = 0;
  Tick max_ticks = 1'000'000;
};

struct RunResult {
  Outcome outcome = Outcome::Stalled;
  std::set<UserId> chosen;    // receivers that output the message
  std::set<UserId> selected;  // owners of the keys the sender picked (U_a)
  Tick ticks = 0;             // time the sender finished, or the last event
  std::size_t keys_remaining = 0;

  nlohmann::json to_json() const;
};

struct RunOutput {
  RunResult result;
  net::Transcript transcript;
  net::NetworkStats stats;
};

/// Throws std::invalid_argument on an invalid request.
RunOutput run_anycast(const AnycastRequest& req, const RunOptions& options);

class UnknownAdversaryAction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Adversary driven by a JSON rule list. Each rule:
///   {"action": "drop"|"delay"|"modify"|"replay"|"insert",
///    "channel": "auth"|"anon", "label": "KeySubmit", "from": 2, "to": 0,
///    "from_corrupted": false, "nth": 0, "limit": 1,
///    "ticks": 200, "offset": 0, "mask": 1, "count": 1,
///    "forge": "random_key"|"corrupted_key", "user": 2}
/// Filters are optional. `nth` fires only on that (0-based) match and
/// `limit` caps how often the rule fires. Inserts build a KeySubmit addressed
/// like the matched envelope: "random_key" signs under a ring the adversary
/// made up, "corrupted_key" signs a fresh key with a corrupted receiver's
/// leaked secret key.
class ScriptedAdversary : public net::Adversary {
 public:
  /// Throws UnknownAdversaryAction on unknown actions and std::invalid_argument
  /// on any other malformed rule.
  ScriptedAdversary(const nlohmann::json& rules, std::uint64_t seed);

  std::vector<net::AdversaryAction> intercept(const net::Interception& env, const net::AdversaryView& view) override;

 private:
  struct Rule {
    std::string action;
    std::optional<net::Channel> channel;
    std::optional<std::string> label;
    std::optional<UserId> from;
    std::optional<UserId> to;
    std::optional<bool> from_corrupted;
    std::optional<std::uint64_t> nth;
    std::optional<std::uint64_t> limit;
    Tick ticks = 0;
    std::size_t offset = 0;
    std::uint8_t mask = 0x01;
    std::uint32_t count = 1;
    std::string forge = "random_key";
    std::optional<UserId> user;
    std::uint64_t matches = 0;
    std::uint64_t fired = 0;
  };

  std::optional<net::AdversaryAction> forge_key_submit(const Rule& r, const net::Interception& env,
                                                      const net::AdversaryView& view);

  std::vector<Rule> rules_;
  Rng rng_;
};

}  // namespace panini::protocol
