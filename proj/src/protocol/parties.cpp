#include "panini/protocol/parties.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace panini::protocol {

namespace {

nlohmann::json hex_list(const std::vector<cipher::SymmetricKey>& keys) {
  auto out = nlohmann::json::array();
  for (const auto& k : keys) out.push_back(k.hex());
  return out;
}

}  // namespace

void AnycastRequest::validate() const {
  if (possible.empty()) throw std::invalid_argument("possible receiver set is empty");
  if (n == 0 || n > possible.size()) throw std::invalid_argument("n must satisfy 1 <= n <= |U_p|");
  std::set<UserId> seen;
  for (UserId u : possible) {
    if (u == sender) throw std::invalid_argument("sender cannot be a possible receiver");
    if (!seen.insert(u).second) throw std::invalid_argument("duplicate possible receiver " + net::to_string(u));
  }
}

std::string_view to_string(AbortReason r) {
  switch (r) {
    case AbortReason::InvalidSignature: return "InvalidSignature";
    case AbortReason::DuplicateKey: return "DuplicateKey";
    case AbortReason::LinkedKeys: return "LinkedKeys";
    case AbortReason::Timeout: return "Timeout";
    case AbortReason::DuplicateVerificationKey: return "DuplicateVerificationKey";
    case AbortReason::InconsistentPeer: return "InconsistentPeer";
    case AbortReason::ExcessKeys: return "ExcessKeys";
  }
  return "?";
}

std::string_view to_string(Sender::Phase p) {
  switch (p) {
    case Sender::Phase::Init: return "init";
    case Sender::Phase::CollectVks: return "collect_vks";
    case Sender::Phase::CollectKeys: return "collect_keys";
    case Sender::Phase::Done: return "done";
    case Sender::Phase::Aborted: return "aborted";
  }
  return "?";
}

std::string_view to_string(Receiver::Status s) {
  switch (s) {
    case Receiver::Status::Idle: return "idle";
    case Receiver::Status::AwaitRing: return "await_ring";
    case Receiver::Status::Submitted: return "submitted";
    case Receiver::Status::DroppedOut: return "dropped_out";
    case Receiver::Status::Aborted: return "aborted";
  }
  return "?";
}

KeySelector uniform_selector() {
  return [](std::span<const cipher::SymmetricKey> remaining, const KeyOwnerOracle&, Rng& rng) {
    return static_cast<std::size_t>(rng.uniform(remaining.size()));
  };
}

// -- sender ------------------------------------------------------------------

Sender::Sender(UserId self, Rng rng, Options options)
    : self_(self), rng_(std::move(rng)), options_(std::move(options)) {
  if (!options_.selector) options_.selector = uniform_selector();
}

Outbox Sender::start(const AnycastRequest& req, Tick) {
  if (phase_ != Phase::Init) throw std::logic_error("sender already started");
  req.validate();
  if (req.sender != self_) throw std::invalid_argument("request names a different sender");
  request_ = req;
  pp_ = lrs::setup(lrs::kSecurityBits);
  rng_.fill(run_id_);

  const Bytes payload = encode(KeyReq{run_id_, pp_.serialize()});
  Outbox out;
  for (UserId u : request_.possible) out.push_back({net::Channel::Auth, u, MessageKind::KeyReq, payload});
  phase_ = Phase::CollectVks;
  return out;
}

Outbox Sender::on_vk(const lrs::VerificationKey& vk, UserId from, Tick now) {
  if (phase_ != Phase::CollectVks) return {};
  if (std::find(request_.possible.begin(), request_.possible.end(), from) == request_.possible.end()) return {};

  if (auto it = vks_.find(from); it != vks_.end()) {
    if (it->second != vk) abort(AbortReason::InconsistentPeer, now);
    return {};
  }
  for (const auto& [u, other] : vks_) {
    if (other == vk) {
      abort(AbortReason::DuplicateVerificationKey, now);
      return {};
    }
  }
  vks_.emplace(from, vk);
  if (vks_.size() < request_.possible.size()) return {};

  std::vector<lrs::VerificationKey> members;
  for (const auto& [u, key] : vks_) members.push_back(key);
  ring_.emplace(std::move(members));
  timer_start_ = now;
  phase_ = Phase::CollectKeys;

  const Bytes payload = encode(RingAnnounce{ring_->serialize()});
  Outbox out;
  for (UserId u : request_.possible) out.push_back({net::Channel::Auth, u, MessageKind::RingAnnounce, payload});
  return out;
}

void Sender::on_key(const cipher::SymmetricKey& key, ByteView signature, Tick now) {
  if (phase_ != Phase::CollectKeys) return;
  if (!lrs::verify(signature, key.bytes, *ring_)) {
    abort(AbortReason::InvalidSignature, now);
    return;
  }
  if (std::find(keys_.begin(), keys_.end(), key) != keys_.end()) {
    abort(AbortReason::DuplicateKey, now);
    return;
  }
  keys_.push_back(key);
  signatures_.push_back(lrs::Signature::deserialize(signature));
  received_.push_back(key);
}

std::optional<Tick> Sender::deadline() const {
  if (phase_ != Phase::CollectKeys) return std::nullopt;
  return timer_start_ + options_.key_timeout;
}

Outbox Sender::settle(Tick now) {
  if (phase_ != Phase::CollectKeys) return {};
  if (keys_.size() >= request_.possible.size()) return link_and_distribute(now);
  if (now >= *deadline()) abort(AbortReason::Timeout, now);
  return {};
}

Outbox Sender::link_and_distribute(Tick now) {
  for (std::size_t i = 0; i < signatures_.size(); ++i) {
    for (std::size_t j = i + 1; j < signatures_.size(); ++j) {
      if (lrs::link(signatures_[i], signatures_[j])) {
        abort(AbortReason::LinkedKeys, now);
        return {};
      }
    }
  }
  if (keys_.size() != request_.possible.size()) {
    abort(AbortReason::ExcessKeys, now);
    return {};
  }

  Outbox out;
  for (std::size_t round = 0; round < request_.n; ++round) {
    const std::size_t idx = options_.selector(keys_, options_.owners, rng_);
    if (idx >= keys_.size()) throw std::logic_error("key selector returned an out-of-range index");
    const cipher::SymmetricKey k = keys_[idx];
    keys_.erase(keys_.begin() + static_cast<std::ptrdiff_t>(idx));
    signatures_.erase(signatures_.begin() + static_cast<std::ptrdiff_t>(idx));
    selected_.push_back(k);

    const Bytes payload = encode(CiphertextMsg{cipher::encrypt(cipher::tagged(request_.message), k, rng_)});
    for (UserId u : request_.possible) out.push_back({net::Channel::Auth, u, MessageKind::CiphertextMsg, payload});
  }
  phase_ = Phase::Done;
  finished_at_ = now;
  return out;
}

void Sender::abort(AbortReason r, Tick now) {
  phase_ = Phase::Aborted;
  abort_reason_ = r;
  finished_at_ = now;
}

nlohmann::json Sender::snapshot() const {
  nlohmann::json vks = nlohmann::json::object();
  for (const auto& [u, vk] : vks_) vks[net::to_string(u)] = vk.hex();
  nlohmann::json possible = nlohmann::json::array();
  for (UserId u : request_.possible) possible.push_back(u.value);
  return {{"role", "sender"},
          {"phase", to_string(phase_)},
          {"message", to_hex(request_.message)},
          {"n", request_.n},
          {"possible", possible},
          {"vks", vks},
          {"ring", ring_ ? nlohmann::json(to_hex(ring_->serialize())) : nlohmann::json()},
          {"keys", hex_list(keys_)},
          {"received", hex_list(received_)},
          {"selected", hex_list(selected_)},
          {"abort", abort_reason_ ? nlohmann::json(to_string(*abort_reason_)) : nlohmann::json()}};
}

// -- receiver ----------------------------------------------------------------

Outbox Receiver::on_keyreq(const KeyReq& req, UserId from) {
  if (status_ != Status::Idle) return {};
  lrs::PublicParams pp;
  try {
    pp = lrs::PublicParams::deserialize(req.pp);
  } catch (const DecodeError&) {
    status_ = Status::Aborted;
    return {};
  }
  if (!pp.supported()) {
    status_ = Status::Aborted;
    return {};
  }
  keypair_ = lrs::keygen(pp, rng_);
  sender_ = from;
  run_id_ = req.hello;
  status_ = Status::AwaitRing;
  return {{net::Channel::Auth, from, MessageKind::VkSubmit, encode(VkSubmit{keypair_->vk})}};
}

Outbox Receiver::on_ring(ByteView ring_bytes, UserId from) {
  if (status_ != Status::AwaitRing || from != sender_) return {};
  try {
    ring_.emplace(lrs::Ring::deserialize(ring_bytes));
  } catch (const DecodeError&) {
    status_ = Status::Aborted;
    return {};
  } catch (const lrs::InvalidRing&) {
    status_ = Status::Aborted;
    return {};
  }
  if (!ring_->contains(keypair_->vk)) {
    status_ = Status::DroppedOut;
    return {};
  }
  ephemeral_ = cipher::keygen(rng_);
  const lrs::Signature sig = lrs::sign(keypair_->sk, ephemeral_->bytes, *ring_, rng_);
  status_ = Status::Submitted;
  return {{net::Channel::Anon, *sender_, MessageKind::KeySubmit, encode(KeySubmit{*ephemeral_, sig.serialize()})}};
}

std::optional<Bytes> Receiver::on_ciphertext(const cipher::Ciphertext& c, UserId from) {
  if (from != sender_) return std::nullopt;
  ciphertexts_.push_back(c.serialize());
  if (!ephemeral_ || delivered_) return std::nullopt;
  cipher::TaggedPlaintext pt = cipher::decrypt(c, *ephemeral_);
  if (!pt.tag_matches()) return std::nullopt;
  delivered_ = std::move(pt.message);
  return delivered_;
}

nlohmann::json Receiver::snapshot() const {
  auto cts = nlohmann::json::array();
  for (const auto& c : ciphertexts_) cts.push_back(to_hex(c));
  auto opt = [](bool has, auto&& f) { return has ? nlohmann::json(f()) : nlohmann::json(); };
  return {{"role", "receiver"},
          {"user", self_.value},
          {"status", to_string(status_)},
          {"sk", opt(keypair_.has_value(), [&] { return keypair_->sk.hex(); })},
          {"vk", opt(keypair_.has_value(), [&] { return keypair_->vk.hex(); })},
          {"ring", opt(ring_.has_value(), [&] { return to_hex(ring_->serialize()); })},
          {"ephemeral", opt(ephemeral_.has_value(), [&] { return ephemeral_->hex(); })},
          {"delivered", opt(delivered_.has_value(), [&] { return to_hex(*delivered_); })},
          {"ciphertexts", cts}};
}

}  // namespace panini::protocol
