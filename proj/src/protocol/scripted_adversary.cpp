#include "panini/protocol/simulation.hpp"

#include <stdexcept>

namespace panini::protocol {

namespace {

const std::set<std::string> kActions = {"drop", "delay", "modify", "replay", "insert"};
const std::set<std::string> kFields = {"action", "channel", "label", "from", "to", "from_corrupted", "nth", "limit",
                                       "ticks", "offset", "mask", "count", "forge", "user"};

net::Channel parse_channel(const std::string& s) {
  if (s == "auth") return net::Channel::Auth;
  if (s == "anon") return net::Channel::Anon;
  throw std::invalid_argument("unknown channel '" + s + "'");
}

}  // namespace

ScriptedAdversary::ScriptedAdversary(const nlohmann::json& rules, std::uint64_t seed) : rng_(seed) {
  if (rules.is_null()) return;
  if (!rules.is_array()) throw std::invalid_argument("adversary script must be a list of rules");
  try {
    for (const auto& j : rules) {
      if (!j.is_object()) throw std::invalid_argument("adversary rule must be an object");
      for (const auto& [k, v] : j.items()) {
        if (kFields.count(k) == 0) throw std::invalid_argument("unknown adversary rule field '" + k + "'");
      }
      Rule r;
      r.action = j.at("action").get<std::string>();
      if (kActions.count(r.action) == 0) throw UnknownAdversaryAction("unknown adversary action '" + r.action + "'");
      if (j.contains("channel")) r.channel = parse_channel(j["channel"].get<std::string>());
      if (j.contains("label")) r.label = j["label"].get<std::string>();
      if (j.contains("from")) r.from = UserId{j["from"].get<std::uint32_t>()};
      if (j.contains("to")) r.to = UserId{j["to"].get<std::uint32_t>()};
      if (j.contains("from_corrupted")) r.from_corrupted = j["from_corrupted"].get<bool>();
      if (j.contains("nth")) r.nth = j["nth"].get<std::uint64_t>();
      if (j.contains("limit")) r.limit = j["limit"].get<std::uint64_t>();
      r.ticks = j.value("ticks", Tick{0});
      r.offset = j.value("offset", std::size_t{0});
      r.mask = j.value("mask", std::uint8_t{0x01});
      r.count = j.value("count", std::uint32_t{1});
      r.forge = j.value("forge", std::string("random_key"));
      if (r.forge != "random_key" && r.forge != "corrupted_key")
        throw std::invalid_argument("unknown forge mode '" + r.forge + "'");
      if (j.contains("user")) r.user = UserId{j["user"].get<std::uint32_t>()};
      rules_.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed adversary rule: ") + e.what());
  }
}

std::vector<net::AdversaryAction> ScriptedAdversary::intercept(const net::Interception& env,
                                                               const net::AdversaryView& view) {
  std::vector<net::AdversaryAction> out;
  for (auto& r : rules_) {
    if (r.channel && *r.channel != env.channel) continue;
    if (r.label && *r.label != env.label) continue;
    if (r.from && *r.from != env.origin) continue;
    if (r.to && *r.to != env.destination) continue;
    if (r.from_corrupted && *r.from_corrupted != (view.corrupted.count(env.origin) != 0)) continue;
    const std::uint64_t index = r.matches++;
    if (r.nth && *r.nth != index) continue;
    if (r.limit && r.fired >= *r.limit) continue;

    std::optional<net::AdversaryAction> action;
    if (r.action == "drop") {
      action = net::Drop{};
    } else if (r.action == "delay") {
      action = net::Delay{r.ticks};
    } else if (r.action == "modify") {
      action = net::Modify{r.offset, r.mask};
    } else if (r.action == "replay") {
      action = net::Replay{r.count};
    } else {
      action = forge_key_submit(r, env, view);
    }
    if (action) {
      ++r.fired;
      out.push_back(std::move(*action));
    }
  }
  return out;
}

std::optional<net::AdversaryAction> ScriptedAdversary::forge_key_submit(const Rule& r, const net::Interception& env,
                                                                       const net::AdversaryView& view) {
  const cipher::SymmetricKey key = cipher::keygen(rng_);
  lrs::Signature sig;
  if (r.forge == "random_key") {
    const lrs::KeyPair kp = lrs::keygen(lrs::setup(lrs::kSecurityBits), rng_);
    sig = lrs::sign(kp.sk, key.bytes, lrs::Ring({kp.vk}), rng_);
  } else {
    const nlohmann::json* state = nullptr;
    for (const auto& [u, s] : view.corrupted) {
      if (r.user && *r.user != u) continue;
      if (s.value("role", "") == "receiver" && s.contains("sk") && !s["sk"].is_null() && s.contains("ring") &&
          !s["ring"].is_null()) {
        state = &s;
        break;
      }
    }
    if (state == nullptr) return std::nullopt;
    const lrs::SecretKey sk = lrs::SecretKey::from_hex((*state)["sk"].get<std::string>());
    const lrs::Ring ring = lrs::Ring::deserialize(from_hex((*state)["ring"].get<std::string>()));
    sig = lrs::sign(sk, key.bytes, ring, rng_);
  }
  net::Insert ins;
  ins.channel = net::Channel::Anon;
  ins.claimed_origin = env.origin;
  ins.destination = env.destination;
  ins.payload = encode(KeySubmit{key, sig.serialize()});
  ins.label = std::string(to_string(MessageKind::KeySubmit));
  return ins;
}

}  // namespace panini::protocol
