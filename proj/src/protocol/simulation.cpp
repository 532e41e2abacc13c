#include "panini/protocol/simulation.hpp"

#include <algorithm>

namespace panini::protocol {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Delivered: return "Delivered";
    case Outcome::InvalidSignature: return "InvalidSignature";
    case Outcome::DuplicateKey: return "DuplicateKey";
    case Outcome::LinkedKeys: return "LinkedKeys";
    case Outcome::Timeout: return "Timeout";
    case Outcome::AuthRejected: return "AuthRejected";
    case Outcome::InconsistentPeer: return "InconsistentPeer";
    case Outcome::DuplicateVerificationKey: return "DuplicateVerificationKey";
    case Outcome::ExcessKeys: return "ExcessKeys";
    case Outcome::Stalled: return "Stalled";
  }
  return "?";
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Delivered: return 0;
    case Outcome::InvalidSignature: return 10;
    case Outcome::DuplicateKey: return 11;
    case Outcome::LinkedKeys: return 12;
    case Outcome::Timeout: return 13;
    case Outcome::AuthRejected: return 14;
    case Outcome::InconsistentPeer: return 15;
    case Outcome::DuplicateVerificationKey: return 16;
    case Outcome::ExcessKeys: return 17;
    case Outcome::Stalled: return 18;
  }
  return 1;
}

Outcome outcome_of(AbortReason r) {
  switch (r) {
    case AbortReason::InvalidSignature: return Outcome::InvalidSignature;
    case AbortReason::DuplicateKey: return Outcome::DuplicateKey;
    case AbortReason::LinkedKeys: return Outcome::LinkedKeys;
    case AbortReason::Timeout: return Outcome::Timeout;
    case AbortReason::DuplicateVerificationKey: return Outcome::DuplicateVerificationKey;
    case AbortReason::InconsistentPeer: return Outcome::InconsistentPeer;
    case AbortReason::ExcessKeys: return Outcome::ExcessKeys;
  }
  return Outcome::Stalled;
}

nlohmann::json RunResult::to_json() const {
  auto ids = [](const std::set<UserId>& s) {
    auto a = nlohmann::json::array();
    for (UserId u : s) a.push_back(u.value);
    return a;
  };
  return {{"outcome", to_string(outcome)},
          {"exit_code", exit_code(outcome)},
          {"chosen", ids(chosen)},
          {"selected", ids(selected)},
          {"ticks", ticks},
          {"keys_remaining", keys_remaining}};
}

RunOutput run_anycast(const AnycastRequest& req, const RunOptions& options) {
  req.validate();
  const Rng master(options.seed);
  net::Network network(options.network, master.derive("network").next_u64());

  network.register_user(req.sender);
  for (UserId u : req.possible) network.register_user(u);
  for (UserId u : options.corrupted.users) network.register_user(u);
  network.set_corruption(options.corrupted);
  network.set_adversary(options.adversary);

  std::map<UserId, Receiver> receivers;
  for (UserId u : req.possible) receivers.emplace(u, Receiver(u, master.derive("receiver", u.value)));

  Sender::Options sopts;
  sopts.key_timeout = options.key_timeout != 0 ? options.key_timeout : 2 * options.network.mix_window;
  sopts.selector = options.selector;
  sopts.owners = [&receivers](const cipher::SymmetricKey& k) -> std::optional<UserId> {
    for (const auto& [u, r] : receivers) {
      if (r.ephemeral() == k) return u;
    }
    return std::nullopt;
  };
  Sender sender(req.sender, master.derive("sender"), std::move(sopts));

  auto dispatch = [&](UserId from, const Outbox& out) {
    for (const auto& o : out) {
      std::string label(to_string(o.kind));
      if (o.channel == net::Channel::Auth) {
        network.auth_send(from, o.payload, o.to, std::move(label));
      } else {
        network.anon_send(from, o.payload, o.to, std::move(label));
      }
    }
  };
  auto leak_sender = [&] {
    if (options.corrupted.contains(req.sender)) network.leak_state(req.sender, sender.snapshot());
  };
  auto leak_receiver = [&](const Receiver& r) {
    if (options.corrupted.contains(r.id())) network.leak_state(r.id(), r.snapshot());
  };

  RunResult result;

  Outbox first = sender.start(req, network.now());
  leak_sender();
  for (const auto& [u, r] : receivers) leak_receiver(r);
  dispatch(req.sender, first);

  while (true) {
    std::optional<Tick> next = network.next_due();
    if (auto dl = sender.deadline()) next = next ? std::min(*next, *dl) : *dl;
    if (!next || *next > options.max_ticks) break;

    const Tick now = *next;
    for (auto& d : network.advance(now)) {
      ProtocolMessage msg;
      try {
        msg = decode(d.payload);
      } catch (const DecodeError&) {
        continue;
      }
      const bool auth = d.channel == net::Channel::Auth && d.origin.has_value();

      if (d.destination == req.sender) {
        Outbox out;
        if (auto* vk = std::get_if<VkSubmit>(&msg); vk && auth) {
          out = sender.on_vk(vk->vk, *d.origin, now);
        } else if (auto* ks = std::get_if<KeySubmit>(&msg); ks && d.channel == net::Channel::Anon) {
          sender.on_key(ks->key, ks->signature, now);
        } else {
          continue;
        }
        leak_sender();
        dispatch(req.sender, out);
        continue;
      }

      auto it = receivers.find(d.destination);
      if (it == receivers.end() || !auth) continue;
      Receiver& r = it->second;
      Outbox out;
      if (auto* kr = std::get_if<KeyReq>(&msg)) {
        out = r.on_keyreq(*kr, *d.origin);
      } else if (auto* ra = std::get_if<RingAnnounce>(&msg)) {
        out = r.on_ring(ra->ring, *d.origin);
      } else if (auto* cm = std::get_if<CiphertextMsg>(&msg)) {
        if (r.on_ciphertext(cm->ciphertext, *d.origin)) result.chosen.insert(r.id());
      } else {
        continue;
      }
      leak_receiver(r);
      dispatch(r.id(), out);
    }

    const auto before = sender.phase();
    Outbox out = sender.settle(now);
    if (!out.empty() || sender.phase() != before) leak_sender();
    dispatch(req.sender, out);
  }

  if (sender.phase() == Sender::Phase::Done) {
    result.outcome = Outcome::Delivered;
  } else if (sender.phase() == Sender::Phase::Aborted) {
    result.outcome = outcome_of(*sender.abort_reason());
  } else {
    result.outcome = network.stats().rejected > 0 ? Outcome::AuthRejected : Outcome::Stalled;
  }
  for (const auto& k : sender.selected()) {
    for (const auto& [u, r] : receivers) {
      if (r.ephemeral() == k) result.selected.insert(u);
    }
  }
  result.ticks = sender.finished_at().value_or(network.now());
  result.keys_remaining = sender.keys().size();

  return RunOutput{std::move(result), network.transcript(), network.stats()};
}

}  // namespace panini::protocol
