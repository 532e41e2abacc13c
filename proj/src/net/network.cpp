#include "panini/net/network.hpp"

#include <algorithm>

namespace panini::net {

namespace {
template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;
}  // namespace

std::string_view action_name(const AdversaryAction& a) {
  return std::visit(Overloaded{[](const Drop&) { return std::string_view("drop"); },
                               [](const Delay&) { return std::string_view("delay"); },
                               [](const Modify&) { return std::string_view("modify"); },
                               [](const Replay&) { return std::string_view("replay"); },
                               [](const Insert&) { return std::string_view("insert"); }},
                    a);
}

Network::Network(NetworkConfig config, std::uint64_t seed) : config_(config), rng_(seed) {
  if (config_.auth_latency == 0) throw std::invalid_argument("auth latency must be at least one tick");
  if (config_.mix_window == 0) throw std::invalid_argument("mix window must be at least one tick");
  rng_.fill(mac_master_);
}

void Network::register_user(UserId u) {
  if (registered(u)) return;
  pair_keys_[u];
  for (auto& [v, keys] : pair_keys_) {
    ByteWriter w;
    w.u32(std::min(u, v).value).u32(std::max(u, v).value);
    MacTag key = hmac_sha256(mac_master_, w.bytes());
    keys[u] = key;
    pair_keys_[u][v] = key;
  }
}

MacTag Network::mac(UserId from, UserId to, ByteView payload) const {
  ByteWriter w;
  w.u32(from.value).u32(to.value).raw(payload);
  return hmac_sha256(pair_keys_.at(from).at(to), w.bytes());
}

void Network::leak_state(UserId u, nlohmann::json state) {
  if (!corruption_.contains(u)) return;
  record("corrupt_state", {{"user", u.value}, {"state", state}});
  leaked_[u] = std::move(state);
}

void Network::record(std::string kind, nlohmann::json data) {
  transcript_.push_back(TranscriptEvent{now_, std::move(kind), std::move(data)});
}

Transcript Network::observe() {
  Transcript out(transcript_.begin() + static_cast<std::ptrdiff_t>(observed_), transcript_.end());
  observed_ = transcript_.size();
  return out;
}

void Network::auth_send(UserId from, Bytes payload, UserId to, std::string label) {
  send(Channel::Auth, from, std::move(payload), to, std::move(label));
}

void Network::anon_send(UserId from, Bytes payload, UserId to, std::string label) {
  send(Channel::Anon, from, std::move(payload), to, std::move(label));
}

void Network::send(Channel channel, UserId from, Bytes payload, UserId to, std::string label) {
  if (!registered(from)) throw UnknownUser(from);
  if (!registered(to)) throw UnknownUser(to);

  Envelope env;
  env.id = next_id_++;
  env.origin = from;
  env.destination = to;
  env.payload = std::move(payload);
  env.submit_time = now_;
  env.channel = channel;
  env.label = std::move(label);
  if (channel == Channel::Auth) env.integrity = mac(from, to, env.payload);
  ++stats_.submitted;

  if (channel == Channel::Auth) {
    record("auth_send", {{"origin", from.value},
                         {"destination", to.value},
                         {"size", env.payload.size() + kMacOverhead},
                         {"label", env.label}});
  } else {
    record("anon_submit", {{"origin", from.value}, {"size", env.payload.size()}, {"label", env.label}});
  }

  std::vector<AdversaryAction> actions;
  if (adversary_ != nullptr) {
    Interception view{env.id, channel, from, to, env.payload.size(), now_, env.label};
    actions = adversary_->intercept(view, AdversaryView{transcript_, leaked_});
  }

  bool dropped = false;
  Tick delay = 0;
  std::uint32_t replays = 0;
  std::vector<Insert> inserts;
  for (const auto& action : actions) {
    record("adversary", {{"action", action_name(action)},
                         {"channel", to_string(channel)},
                         {"label", env.label},
                         {"target", env.id}});
    std::visit(Overloaded{[&](const Drop&) { dropped = true; },
                          [&](const Delay& d) { delay += d.ticks; },
                          [&](const Modify& m) {
                            if (m.offset < env.payload.size()) env.payload[m.offset] ^= m.mask;
                          },
                          [&](const Replay& r) { replays += r.count; },
                          [&](const Insert& i) { inserts.push_back(i); }},
               action);
  }

  if (dropped) {
    ++stats_.dropped;
  } else {
    for (std::uint32_t i = 1; i <= replays; ++i) {
      Envelope copy = env;
      copy.id = next_id_++;
      ++stats_.injected;
      route(std::move(copy), delay + i);
    }
    route(std::move(env), delay);
  }

  for (auto& ins : inserts) {
    Envelope forged;
    forged.id = next_id_++;
    forged.origin = ins.claimed_origin;
    forged.destination = ins.destination;
    forged.payload = std::move(ins.payload);
    forged.submit_time = now_;
    forged.channel = ins.channel;
    forged.label = std::move(ins.label);
    if (ins.channel == Channel::Auth) {
      MacTag guess{};
      rng_.fill(guess);
      forged.integrity = guess;
    }
    ++stats_.injected;
    route(std::move(forged), ins.delay);
  }
}

void Network::route(Envelope env, Tick delay) {
  ++stats_.in_flight;
  if (env.channel == Channel::Auth) {
    enqueue(now_ + config_.auth_latency + delay, AuthDeliver{std::move(env)});
  } else if (delay == 0) {
    if (!round_open_) {
      round_open_ = true;
      enqueue(now_ + config_.mix_window, MixClose{});
    }
    mix_entries_.push_back(std::move(env));
  } else {
    enqueue(now_ + delay, AnonArrive{std::move(env)});
  }
}

void Network::enqueue(Tick due, Payload payload) {
  const int phase = std::holds_alternative<MixClose>(payload) ? 1 : 0;
  queue_.push(Queued{due, phase, rng_.next_u64(), seq_++, std::move(payload)});
}

std::optional<Tick> Network::next_due() const {
  if (queue_.empty()) return std::nullopt;
  return queue_.top().due;
}

std::vector<Delivery> Network::advance(Tick until) {
  if (until < now_) throw std::invalid_argument("cannot advance the clock backwards");
  std::vector<Delivery> out;
  while (!queue_.empty() && queue_.top().due <= until) {
    Queued item = queue_.top();
    queue_.pop();
    now_ = item.due;
    std::visit(Overloaded{[&](AuthDeliver& d) { deliver_auth(std::move(d.envelope), out); },
                          [&](AnonArrive& a) {
                            --stats_.in_flight;
                            route(std::move(a.envelope), 0);
                          },
                          [&](MixClose&) { close_round(out); }},
               item.payload);
  }
  now_ = until;
  return out;
}

void Network::deliver_auth(Envelope env, std::vector<Delivery>& out) {
  --stats_.in_flight;
  const bool authentic = registered(env.origin) && registered(env.destination) && env.integrity &&
                         *env.integrity == mac(env.origin, env.destination, env.payload);
  if (!authentic) {
    ++stats_.rejected;
    record("integrity_violation",
           {{"claimed_origin", env.origin.value}, {"destination", env.destination.value}, {"label", env.label}});
    return;
  }
  ++stats_.delivered;
  record("auth_deliver", {{"origin", env.origin.value},
                          {"destination", env.destination.value},
                          {"size", env.payload.size() + kMacOverhead},
                          {"label", env.label}});
  out.push_back(Delivery{now_, Channel::Auth, env.destination, env.origin, std::move(env.payload),
                         std::move(env.label), env.id});
}

void Network::close_round(std::vector<Delivery>& out) {
  for (std::size_t i = mix_entries_.size(); i > 1; --i) {
    std::size_t j = rng_.uniform(i);
    std::swap(mix_entries_[i - 1], mix_entries_[j]);
  }
  nlohmann::json destinations = nlohmann::json::array();
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& e : mix_entries_) {
    destinations.push_back(e.destination.value);
    sizes.push_back(e.payload.size());
  }
  record("anon_batch", {{"count", mix_entries_.size()}, {"destinations", destinations}, {"sizes", sizes}});
  for (auto& e : mix_entries_) {
    --stats_.in_flight;
    ++stats_.delivered;
    out.push_back(Delivery{now_, Channel::Anon, e.destination, std::nullopt, std::move(e.payload),
                           std::move(e.label), e.id});
  }
  mix_entries_.clear();
  round_open_ = false;
}

}  // namespace panini::net
