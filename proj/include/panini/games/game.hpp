#pragma once

// Challenger side of the three indistinguishability games:
//
//   mc  message confidentiality: A submits (m0, m1), sees a run on m_b, guesses b.
//   ra  receiver anonymity: A sees a run, may unveil U_a of earlier runs, then
//       names a user it believes is in U_a.
//   f   fairness: like ra, but the guess goes in with the challenge, before
//       any output is seen.
//
// Output is withheld whenever handing it over would make the win trivial.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "panini/games/anycast.hpp"

namespace panini::games {

enum class GameKind { MessageConfidentiality, ReceiverAnonymity, Fairness };

std::string_view to_string(GameKind g);  // "mc", "ra", "f"
/// Throws std::invalid_argument on unknown names.
GameKind parse_game(std::string_view name);

struct Challenge {
  UserId sender;
  std::vector<Bytes> messages;  // two for mc, one otherwise
  std::size_t n = 1;
  std::vector<UserId> possible;
};

struct RoundRecord {
  Challenge challenge;
  bool withheld = false;
  net::Transcript transcript;                // empty when withheld
  std::optional<std::set<UserId>> unveiled;  // set once A unveils this round
};

/// Everything the adversary has learned so far.
struct GameHistory {
  GameKind game = GameKind::MessageConfidentiality;
  std::vector<RoundRecord> rounds;
  net::CorruptionSet corrupted;
  std::map<UserId, nlohmann::json> corruption_responses;
};

struct SubmitChallenge {
  Challenge challenge;
  std::optional<UserId> guess;  // f only: the guess for this very run
};
struct Corrupt {
  std::set<UserId> users;
};
struct Unveil {};
struct GuessBit {
  int bit = 0;
};
struct GuessUser {
  UserId user;
};

using GameAction = std::variant<SubmitChallenge, Corrupt, Unveil, GuessBit, GuessUser>;

class GameAdversary {
 public:
  virtual ~GameAdversary() = default;
  virtual std::string name() const = 0;
  virtual GameAction next(const GameHistory& history, Rng& rng) = 0;
};

class InvalidGameAction : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("adversary exceeded its action budget") {}
};

struct AdvantageEstimate {
  std::string game;
  std::string protocol;
  std::string adversary;
  std::uint64_t trials = 0;
  std::uint64_t wins = 0;
  double baseline = 0;  // mean winning probability of blind guessing
  double advantage = 0;
  double sigma = 0;

  /// Within three standard deviations of the blind-guess baseline.
  bool negligible() const;
  nlohmann::json to_json() const;
};

struct GameConfig {
  std::size_t instances = 1000;
  std::uint64_t seed = 0;
  std::size_t action_budget = 64;
};

/// Plays `instances` independent games.
AdvantageEstimate play(GameKind game, AnycastProtocol& protocol, GameAdversary& adversary, const GameConfig& config);

}  // namespace panini::games
