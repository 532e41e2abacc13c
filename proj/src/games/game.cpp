#include "panini/games/game.hpp"

#include <algorithm>
#include <cmath>

namespace panini::games {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

bool any_corrupted(const std::set<UserId>& users, const net::CorruptionSet& c) {
  return std::any_of(users.begin(), users.end(), [&](UserId u) { return c.contains(u); });
}

struct InstanceResult {
  bool win = false;
  double baseline = 0;
};

class Instance {
 public:
  Instance(GameKind game, AnycastProtocol& protocol, Rng rng) : protocol_(protocol), rng_(std::move(rng)) {
    history_.game = game;
    b_ = rng_.coin() ? 1 : 0;
  }

  std::optional<InstanceResult> apply(const GameAction& action) {
    return std::visit(
        Overloaded{[&](const SubmitChallenge& a) { return submit(a); },
                   [&](const Corrupt& a) -> std::optional<InstanceResult> {
                     for (UserId u : a.users) {
                       history_.corrupted.users.insert(u);
                       // Between runs nobody holds protocol state.
                       history_.corruption_responses[u] = {{"user", u.value}, {"state", nullptr}};
                     }
                     return std::nullopt;
                   },
                   [&](const Unveil&) -> std::optional<InstanceResult> {
                     if (game() == GameKind::MessageConfidentiality) throw InvalidGameAction("no unveil in mc");
                     if (!pending_) throw InvalidGameAction("nothing to unveil");
                     history_.rounds[*pending_].unveiled = actual_[*pending_];
                     pending_.reset();
                     return std::nullopt;
                   },
                   [&](const GuessBit& g) -> std::optional<InstanceResult> {
                     if (game() != GameKind::MessageConfidentiality) throw InvalidGameAction("bit guess outside mc");
                     if (history_.rounds.empty()) throw InvalidGameAction("guess before any challenge");
                     return InstanceResult{g.bit == b_, 0.5};
                   },
                   [&](const GuessUser& g) -> std::optional<InstanceResult> {
                     if (game() != GameKind::ReceiverAnonymity) throw InvalidGameAction("user guess outside ra");
                     if (!pending_) throw InvalidGameAction("guess needs a challenge that was not unveiled");
                     const Challenge& c = history_.rounds[*pending_].challenge;
                     return InstanceResult{actual_[*pending_].count(g.user) != 0,
                                           static_cast<double>(c.n) / static_cast<double>(c.possible.size())};
                   }},
        action);
  }

  const GameHistory& history() const { return history_; }

 private:
  GameKind game() const { return history_.game; }

  std::optional<InstanceResult> submit(const SubmitChallenge& a) {
    const Challenge& c = a.challenge;
    const bool mc = game() == GameKind::MessageConfidentiality;
    if (mc) {
      if (c.messages.size() != 2 || c.messages[0].size() != c.messages[1].size())
        throw InvalidGameAction("mc challenge needs two messages of equal length");
    } else if (c.messages.size() != 1) {
      throw InvalidGameAction("challenge needs exactly one message");
    }
    if (a.guess && game() != GameKind::Fairness) throw InvalidGameAction("only f takes a guess with the challenge");

    AnycastRequest req{c.sender, c.messages[mc ? static_cast<std::size_t>(b_) : 0], c.n, c.possible};
    try {
      req.validate();
    } catch (const std::invalid_argument& e) {
      throw InvalidGameAction(e.what());
    }
    Execution ex = protocol_.execute(req, history_.corrupted, rng_.next_u64());

    if (a.guess) {
      return InstanceResult{ex.actual.count(*a.guess) != 0,
                            static_cast<double>(c.n) / static_cast<double>(c.possible.size())};
    }

    bool withheld = false;
    if (mc) {
      withheld = history_.corrupted.contains(c.sender) || any_corrupted(ex.actual, history_.corrupted);
    } else {
      std::set<UserId> rest;
      for (UserId u : c.possible)
        if (ex.actual.count(u) == 0) rest.insert(u);
      const bool rest_corrupted =
          std::all_of(rest.begin(), rest.end(), [&](UserId u) { return history_.corrupted.contains(u); });
      withheld = any_corrupted(ex.actual, history_.corrupted) || rest_corrupted;
    }
    RoundRecord rec{c, withheld, {}, std::nullopt};
    if (!withheld) rec.transcript = std::move(ex.transcript);
    history_.rounds.push_back(std::move(rec));
    actual_.push_back(std::move(ex.actual));
    pending_ = history_.rounds.size() - 1;
    return std::nullopt;
  }

  AnycastProtocol& protocol_;
  Rng rng_;
  GameHistory history_;
  std::vector<std::set<UserId>> actual_;
  std::optional<std::size_t> pending_;
  int b_ = 0;
};

}  // namespace

std::string_view to_string(GameKind g) {
  switch (g) {
    case GameKind::MessageConfidentiality: return "mc";
    case GameKind::ReceiverAnonymity: return "ra";
    case GameKind::Fairness: return "f";
  }
  return "?";
}

GameKind parse_game(std::string_view name) {
  if (name == "mc") return GameKind::MessageConfidentiality;
  if (name == "ra") return GameKind::ReceiverAnonymity;
  if (name == "f") return GameKind::Fairness;
  throw std::invalid_argument("unknown game '" + std::string(name) + "'");
}

bool AdvantageEstimate::negligible() const { return std::abs(advantage) <= 3 * sigma; }

nlohmann::json AdvantageEstimate::to_json() const {
  return {{"game", game},
          {"protocol", protocol},
          {"adversary", adversary},
          {"rounds", trials},
          {"wins", wins},
          {"baseline", baseline},
          {"advantage", advantage},
          {"sigma", sigma},
          {"verdict", negligible() ? "PASS" : "FAIL"}};
}

AdvantageEstimate play(GameKind game, AnycastProtocol& protocol, GameAdversary& adversary, const GameConfig& config) {
  if (config.instances == 0) throw std::invalid_argument("need at least one game instance");
  const Rng master(config.seed);
  AdvantageEstimate est;
  est.game = std::string(to_string(game));
  est.protocol = protocol.name();
  est.adversary = adversary.name();
  double baseline_sum = 0;
  double variance_sum = 0;

  for (std::size_t i = 0; i < config.instances; ++i) {
    Instance inst(game, protocol, master.derive("challenger", i));
    Rng arng = master.derive("adversary", i);
    std::optional<InstanceResult> result;
    for (std::size_t step = 0; step < config.action_budget && !result; ++step) {
      result = inst.apply(adversary.next(inst.history(), arng));
    }
    if (!result) throw BudgetExhausted();
    ++est.trials;
    if (result->win) ++est.wins;
    baseline_sum += result->baseline;
    variance_sum += result->baseline * (1 - result->baseline);
  }

  const double n = static_cast<double>(est.trials);
  est.baseline = baseline_sum / n;
  est.advantage = static_cast<double>(est.wins) / n - est.baseline;
  est.sigma = std::sqrt(variance_sum) / n;
  return est;
}

}  // namespace panini::games
