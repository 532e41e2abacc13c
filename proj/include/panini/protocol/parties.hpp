#pragma once

// Sender and receiver state machines for one anycast run.
//
// Handlers never touch the network: they return an Outbox that the driver
// hands to the channels, so they can be exercised in isolation.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "panini/common/rng.hpp"
#include "panini/crypto/cipher.hpp"
#include "panini/crypto/lrs.hpp"
#include "panini/net/types.hpp"
#include "panini/protocol/messages.hpp"

namespace panini::protocol {

using net::Tick;
using net::UserId;

/// (m, n, U_p) from sender s.
struct AnycastRequest {
  UserId sender;
  Bytes message;
  std::size_t n = 1;
  std::vector<UserId> possible;

  /// Throws std::invalid_argument unless 1 <= n <= |possible|, possible has
  /// no duplicates and does not contain the sender.
  void validate() const;
};

enum class AbortReason {
  InvalidSignature,
  DuplicateKey,
  LinkedKeys,
  Timeout,
  DuplicateVerificationKey,  // two members answered with the same vk
  InconsistentPeer,          // one member answered with two different vks
  ExcessKeys,                // more than l unlinked, valid keys
};

std::string_view to_string(AbortReason r);

struct Outgoing {
  net::Channel channel;
  UserId to;
  MessageKind kind;
  Bytes payload;
};

using Outbox = std::vector<Outgoing>;

/// Ground truth available to the simulation harness (never to the protocol
/// itself): who generated a given ephemeral key.
using KeyOwnerOracle = std::function<std::optional<UserId>(const cipher::SymmetricKey&)>;

/// Chooses the index of the next key to encrypt under. The honest sender
/// ignores the oracle and draws uniformly.
using KeySelector =
    std::function<std::size_t(std::span<const cipher::SymmetricKey> remaining, const KeyOwnerOracle&, Rng&)>;

KeySelector uniform_selector();

class Sender {
 public:
  enum class Phase { Init, CollectVks, CollectKeys, Done, Aborted };

  struct Options {
    Tick key_timeout = 200;
    KeySelector selector;  // empty: uniform
    KeyOwnerOracle owners;
  };

  Sender(UserId self, Rng rng, Options options);

  /// P0: Sig.Setup, then an identical KeyReq to every possible receiver.
  Outbox start(const AnycastRequest& req, Tick now);

  /// Collects verification keys. Outsiders are ignored, an identical re-send
  /// is treated as a replay; the ring goes out once every member answered.
  Outbox on_vk(const lrs::VerificationKey& vk, UserId from, Tick now);

  /// P1 key collection: verify, reject duplicates.
  void on_key(const cipher::SymmetricKey& key, ByteView signature, Tick now);

  /// Called once all deliveries for a tick are processed. Enforces the
  /// timeout and, once every key is in, runs the link check and P2.
  Outbox settle(Tick now);

  Phase phase() const { return phase_; }
  std::optional<AbortReason> abort_reason() const { return abort_reason_; }
  bool finished() const { return phase_ == Phase::Done || phase_ == Phase::Aborted; }
  /// Tick at which missing keys time out; set only while collecting keys.
  std::optional<Tick> deadline() const;
  std::optional<Tick> finished_at() const { return finished_at_; }

  const std::optional<lrs::Ring>& ring() const { return ring_; }
  /// K: keys not yet used for distribution.
  const std::vector<cipher::SymmetricKey>& keys() const { return keys_; }
  const std::vector<lrs::Signature>& signatures() const { return signatures_; }
  /// Every key accepted, in arrival order.
  const std::vector<cipher::SymmetricKey>& received() const { return received_; }
  /// k* of each P2 round, in order.
  const std::vector<cipher::SymmetricKey>& selected() const { return selected_; }

  nlohmann::json snapshot() const;

 private:
  Outbox link_and_distribute(Tick now);
  void abort(AbortReason r, Tick now);

  UserId self_;
  Rng rng_;
  Options options_;
  Phase phase_ = Phase::Init;
  std::optional<AbortReason> abort_reason_;
  std::optional<Tick> finished_at_;

  AnycastRequest request_;
  lrs::PublicParams pp_;
  RunId run_id_{};
  std::map<UserId, lrs::VerificationKey> vks_;
  std::optional<lrs::Ring> ring_;
  Tick timer_start_ = 0;
  std::vector<cipher::SymmetricKey> keys_;
  std::vector<lrs::Signature> signatures_;
  std::vector<cipher::SymmetricKey> received_;
  std::vector<cipher::SymmetricKey> selected_;
};

class Receiver {
 public:
  enum class Status { Idle, AwaitRing, Submitted, DroppedOut, Aborted };

  Receiver(UserId self, Rng rng) : self_(self), rng_(std::move(rng)) {}

  /// First KeyReq: Sig.KeyGen and answer with vk. Later KeyReqs are discarded.
  Outbox on_keyreq(const KeyReq& req, UserId from);
  /// Checks membership, then submits a signed ephemeral key anonymously.
  Outbox on_ring(ByteView ring_bytes, UserId from);
  /// Returns the message iff the decrypted tag matches. No reaction otherwise.
  std::optional<Bytes> on_ciphertext(const cipher::Ciphertext& c, UserId from);

  UserId id() const { return self_; }
  Status status() const { return status_; }
  const std::optional<lrs::KeyPair>& keypair() const { return keypair_; }
  const std::optional<lrs::Ring>& ring() const { return ring_; }
  const std::optional<cipher::SymmetricKey>& ephemeral() const { return ephemeral_; }
  const std::optional<Bytes>& delivered() const { return delivered_; }

  nlohmann::json snapshot() const;

 private:
  UserId self_;
  Rng rng_;
  Status status_ = Status::Idle;
  std::optional<UserId> sender_;
  RunId run_id_{};
  std::optional<lrs::KeyPair> keypair_;
  std::optional<lrs::Ring> ring_;
  std::optional<cipher::SymmetricKey> ephemeral_;
  std::optional<Bytes> delivered_;
  std::vector<Bytes> ciphertexts_;
};

std::string_view to_string(Sender::Phase p);
std::string_view to_string(Receiver::Status s);

}  // namespace panini::protocol
