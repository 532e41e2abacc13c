#include "panini/games/adversaries.hpp"

#include <bit>

namespace panini::games {

namespace {

Challenge challenge(const ChallengeShape& s, std::vector<Bytes> messages) {
  return Challenge{s.sender, std::move(messages), s.n, s.possible};
}

std::vector<Bytes> two_random(const ChallengeShape& s, Rng& rng) {
  Bytes m0 = rng.bytes(s.message_bytes);
  Bytes m1 = m0;
  if (!m1.empty()) m1[0] ^= 0x80;
  return {std::move(m0), std::move(m1)};
}

/// Latest state leaked by user u in a transcript, or null.
const nlohmann::json* leaked_state(const net::Transcript& t, UserId u) {
  const nlohmann::json* out = nullptr;
  for (const auto* e : net::events_of(t, "corrupt_state")) {
    if (e->data.value("user", std::uint32_t{0}) == u.value) out = &e->data["state"];
  }
  return out;
}

class BlindGuesser : public GameAdversary {
 public:
  explicit BlindGuesser(ChallengeShape s) : s_(std::move(s)) {}
  std::string name() const override { return "blind"; }
  GameAction next(const GameHistory& h, Rng& rng) override {
    const UserId pick = s_.possible[rng.uniform(s_.possible.size())];
    switch (h.game) {
      case GameKind::MessageConfidentiality:
        if (h.rounds.empty()) return SubmitChallenge{challenge(s_, two_random(s_, rng)), std::nullopt};
        return GuessBit{rng.coin() ? 1 : 0};
      case GameKind::ReceiverAnonymity:
        if (h.rounds.empty()) return SubmitChallenge{challenge(s_, {rng.bytes(s_.message_bytes)}), std::nullopt};
        return GuessUser{pick};
      case GameKind::Fairness:
        break;
    }
    return SubmitChallenge{challenge(s_, {rng.bytes(s_.message_bytes)}), pick};
  }

 private:
  ChallengeShape s_;
};

class ByteFrequency : public GameAdversary {
 public:
  explicit ByteFrequency(ChallengeShape s) : s_(std::move(s)), spy_(s_.possible.back()) {}
  std::string name() const override { return "byte-frequency"; }
  GameAction next(const GameHistory& h, Rng& rng) override {
    if (h.game != GameKind::MessageConfidentiality) throw InvalidGameAction("byte-frequency plays mc only");
    if (!h.corrupted.contains(spy_)) return Corrupt{{spy_}};
    if (h.rounds.empty()) {
      return SubmitChallenge{
          challenge(s_, {Bytes(s_.message_bytes, 0x00), Bytes(s_.message_bytes, 0xFF)}), std::nullopt};
    }
    const RoundRecord& r = h.rounds.back();
    if (!r.withheld) {
      const nlohmann::json* st = leaked_state(r.transcript, spy_);
      if (st != nullptr && st->contains("ciphertexts") && !(*st)["ciphertexts"].empty()) {
        const auto ct = cipher::Ciphertext::deserialize(from_hex((*st)["ciphertexts"][0].get<std::string>()));
        std::size_t ones = 0;
        std::size_t bits = 0;
        for (std::size_t i = cipher::kTagBytes; i < ct.body.size(); ++i) {
          ones += static_cast<std::size_t>(std::popcount(ct.body[i]));
          bits += 8;
        }
        if (2 * ones != bits) return GuessBit{2 * ones > bits ? 1 : 0};
      }
    }
    return GuessBit{rng.coin() ? 1 : 0};
  }

 private:
  ChallengeShape s_;
  UserId spy_;
};

class ReadOff : public GameAdversary {
 public:
  explicit ReadOff(ChallengeShape s) : s_(std::move(s)) {}
  std::string name() const override { return "read-off"; }
  GameAction next(const GameHistory& h, Rng& rng) override {
    if (h.game != GameKind::MessageConfidentiality) throw InvalidGameAction("read-off plays mc only");
    if (h.rounds.empty()) return SubmitChallenge{challenge(s_, two_random(s_, rng)), std::nullopt};
    const RoundRecord& r = h.rounds.back();
    for (const auto* e : net::events_of(r.transcript, "published_message")) {
      const Bytes m = from_hex(e->data.at("message").get<std::string>());
      if (m == r.challenge.messages[0]) return GuessBit{0};
      if (m == r.challenge.messages[1]) return GuessBit{1};
    }
    return GuessBit{rng.coin() ? 1 : 0};
  }

 private:
  ChallengeShape s_;
};

class BestTranscript : public GameAdversary {
 public:
  explicit BestTranscript(ChallengeShape s) : s_(std::move(s)) {}
  std::string name() const override { return "best-transcript"; }
  GameAction next(const GameHistory& h, Rng& rng) override {
    if (h.game != GameKind::ReceiverAnonymity) throw InvalidGameAction("best-transcript plays ra only");
    if (!h.corrupted.contains(s_.sender)) return Corrupt{{s_.sender}};
    if (h.rounds.empty()) return SubmitChallenge{challenge(s_, {rng.bytes(s_.message_bytes)}), std::nullopt};
    return GuessUser{guess(h.rounds.back())};
  }

 private:
  UserId guess(const RoundRecord& r) const {
    for (const auto* e : net::events_of(r.transcript, "published_receivers")) {
      const auto& users = e->data.at("users");
      if (!users.empty()) return UserId{users[0].get<std::uint32_t>()};
    }
    const nlohmann::json* st = leaked_state(r.transcript, s_.sender);
    if (st != nullptr && st->contains("selected") && !(*st)["selected"].empty()) {
      const auto& received = (*st)["received"];
      const auto chosen = (*st)["selected"][0];
      std::vector<UserId> origins;
      for (const auto* e : net::events_of(r.transcript, "anon_submit")) {
        if (e->data.value("label", "") == "KeySubmit") origins.push_back(UserId{e->data["origin"].get<std::uint32_t>()});
      }
      for (std::size_t k = 0; k < received.size() && k < origins.size(); ++k) {
        if (received[k] == chosen) return origins[k];
      }
    }
    return s_.possible.front();
  }

  ChallengeShape s_;
};

class GuessFirst : public GameAdversary {
 public:
  explicit GuessFirst(ChallengeShape s) : s_(std::move(s)) {}
  std::string name() const override { return "guess-first"; }
  GameAction next(const GameHistory& h, Rng& rng) override {
    if (h.game == GameKind::Fairness)
      return SubmitChallenge{challenge(s_, {rng.bytes(s_.message_bytes)}), s_.possible.front()};
    if (h.game != GameKind::ReceiverAnonymity) throw InvalidGameAction("guess-first plays ra and f only");
    if (h.rounds.empty()) return SubmitChallenge{challenge(s_, {rng.bytes(s_.message_bytes)}), std::nullopt};
    return GuessUser{s_.possible.front()};
  }

 private:
  ChallengeShape s_;
};

}  // namespace

ChallengeShape default_shape(std::size_t l, std::size_t n) {
  ChallengeShape s;
  for (std::uint32_t i = 1; i <= l; ++i) s.possible.push_back(UserId{i});
  s.n = n;
  return s;
}

std::unique_ptr<GameAdversary> make_blind_guesser(ChallengeShape shape) {
  return std::make_unique<BlindGuesser>(std::move(shape));
}
std::unique_ptr<GameAdversary> make_byte_frequency_adversary(ChallengeShape shape) {
  return std::make_unique<ByteFrequency>(std::move(shape));
}
std::unique_ptr<GameAdversary> make_read_off_adversary(ChallengeShape shape) {
  return std::make_unique<ReadOff>(std::move(shape));
}
std::unique_ptr<GameAdversary> make_best_transcript_adversary(ChallengeShape shape) {
  return std::make_unique<BestTranscript>(std::move(shape));
}
std::unique_ptr<GameAdversary> make_guess_first_adversary(ChallengeShape shape) {
  return std::make_unique<GuessFirst>(std::move(shape));
}

std::vector<std::unique_ptr<GameAdversary>> adversary_suite(GameKind game, const ChallengeShape& shape) {
  std::vector<std::unique_ptr<GameAdversary>> out;
  switch (game) {
    case GameKind::MessageConfidentiality:
      out.push_back(make_byte_frequency_adversary(shape));
      out.push_back(make_read_off_adversary(shape));
      break;
    case GameKind::ReceiverAnonymity:
      out.push_back(make_best_transcript_adversary(shape));
      out.push_back(make_guess_first_adversary(shape));
      break;
    case GameKind::Fairness:
      out.push_back(make_guess_first_adversary(shape));
      break;
  }
  out.push_back(make_blind_guesser(shape));
  return out;
}

}  // namespace panini::games
