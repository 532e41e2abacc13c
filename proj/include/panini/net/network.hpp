#pragma once

// Discrete-event network with two channels:
//
//  * auth: authenticated, confidential unicast. Envelopes carry a MAC under a
//    per-pair key; the observer sees endpoints, size and time but never the
//    payload.
//  * anon: a threshold mix. The first arrival opens a round of length T; at
//    round close every entry that arrived in the window is shuffled uniformly
//    and delivered with its origin stripped.
//
// An adversary program sees every envelope as it enters the network and may
// drop, delay, modify, replay it or insert new traffic.

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <variant>
#include <vector>

#include "panini/common/rng.hpp"
#include "panini/net/transcript.hpp"
#include "panini/net/types.hpp"

namespace panini::net {

class UnknownUser : public std::invalid_argument {
 public:
  explicit UnknownUser(UserId u) : std::invalid_argument("unknown user " + to_string(u)) {}
};

struct NetworkConfig {
  Tick auth_latency = 1;
  Tick mix_window = 100;  // T
};

// -- adversary ---------------------------------------------------------------

struct Drop {};
struct Delay {
  Tick ticks = 0;
};
/// XOR mask applied at a payload offset (offsets past the end are ignored).
struct Modify {
  std::size_t offset = 0;
  std::uint8_t mask = 0x01;
};
/// Extra copies of the intercepted envelope, one tick apart.
struct Replay {
  std::uint32_t count = 1;
};
/// Adversary-built traffic. Auth inserts carry a forged token and are rejected
/// at delivery; anon inserts are indistinguishable from honest submissions.
struct Insert {
  Channel channel = Channel::Anon;
  UserId claimed_origin;
  UserId destination;
  Bytes payload;
  std::string label;
  Tick delay = 0;
};

using AdversaryAction = std::variant<Drop, Delay, Modify, Replay, Insert>;

std::string_view action_name(const AdversaryAction& a);

/// What the adversary sees of an envelope entering the network. Payloads are
/// confidential on both channels; only metadata is exposed.
struct Interception {
  std::uint64_t envelope_id = 0;
  Channel channel = Channel::Auth;
  UserId origin;
  UserId destination;
  std::size_t size = 0;
  Tick time = 0;
  std::string label;
};

struct AdversaryView {
  const Transcript& transcript;                       // observer view so far
  const std::map<UserId, nlohmann::json>& corrupted;  // latest leaked state per corrupted user
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::vector<AdversaryAction> intercept(const Interception& env, const AdversaryView& view) = 0;
};

// -- network -----------------------------------------------------------------

/// Conservation accounting: every envelope that enters is eventually delivered,
/// dropped, or rejected by the integrity check.
struct NetworkStats {
  std::uint64_t submitted = 0;  // honest sends
  std::uint64_t injected = 0;   // adversary inserts and replay copies
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t rejected = 0;
  std::uint64_t in_flight = 0;
};

class Network {
 public:
  static constexpr std::size_t kMacOverhead = 32;

  Network(NetworkConfig config, std::uint64_t seed);

  void register_user(UserId u);
  bool registered(UserId u) const { return pair_keys_.count(u) != 0; }

  /// Non-owning; pass nullptr to detach.
  void set_adversary(Adversary* adversary) { adversary_ = adversary; }
  void set_corruption(CorruptionSet c) { corruption_ = std::move(c); }
  const CorruptionSet& corruption() const { return corruption_; }

  /// Records a state snapshot if u is corrupted; no-op otherwise.
  void leak_state(UserId u, nlohmann::json state);

  Tick now() const { return now_; }
  const NetworkConfig& config() const { return config_; }

  void auth_send(UserId from, Bytes payload, UserId to, std::string label = {});
  void anon_send(UserId from, Bytes payload, UserId to, std::string label = {});

  /// Due time of the next queued event, if any.
  std::optional<Tick> next_due() const;

  /// Processes everything due at or before `until` and moves the clock there.
  /// Deliveries come back in due-time order; same-tick ties are ordered by a
  /// seeded shuffle.
  std::vector<Delivery> advance(Tick until);

  const Transcript& transcript() const { return transcript_; }
  /// Observer events recorded since the previous call.
  Transcript observe();

  const NetworkStats& stats() const { return stats_; }

 private:
  struct AuthDeliver {
    Envelope envelope;
  };
  struct AnonArrive {
    Envelope envelope;
  };
  struct MixClose {};
  using Payload = std::variant<AuthDeliver, AnonArrive, MixClose>;

  struct Queued {
    Tick due;
    int phase;  // arrivals before round closes within a tick
    std::uint64_t tiebreak;
    std::uint64_t seq;
    Payload payload;
  };
  struct Later {
    bool operator()(const Queued& a, const Queued& b) const {
      if (a.due != b.due) return a.due > b.due;
      if (a.phase != b.phase) return a.phase > b.phase;
      if (a.tiebreak != b.tiebreak) return a.tiebreak > b.tiebreak;
      return a.seq > b.seq;
    }
  };

  void send(Channel channel, UserId from, Bytes payload, UserId to, std::string label);
  void enqueue(Tick due, Payload payload);
  void route(Envelope env, Tick delay);
  MacTag mac(UserId from, UserId to, ByteView payload) const;
  void record(std::string kind, nlohmann::json data);
  void deliver_auth(Envelope env, std::vector<Delivery>& out);
  void close_round(std::vector<Delivery>& out);

  NetworkConfig config_;
  Rng rng_;
  Rng::Key mac_master_{};
  std::map<UserId, std::map<UserId, MacTag>> pair_keys_;
  Adversary* adversary_ = nullptr;
  CorruptionSet corruption_;
  std::map<UserId, nlohmann::json> leaked_;

  Tick now_ = 0;
  std::uint64_t next_id_ = 1;
  std::uint64_t seq_ = 0;
  std::priority_queue<Queued, std::vector<Queued>, Later> queue_;
  std::vector<Envelope> mix_entries_;
  bool round_open_ = false;

  Transcript transcript_;
  std::size_t observed_ = 0;
  NetworkStats stats_;
};

}  // namespace panini::net
