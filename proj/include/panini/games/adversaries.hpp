#pragma once

#include <memory>
#include <vector>

#include "panini/games/game.hpp"

namespace panini::games {

/// Parameters every canned adversary uses for its challenges.
struct ChallengeShape {
  UserId sender{0};
  std::vector<UserId> possible;
  std::size_t n = 1;
  std::size_t message_bytes = 32;
};

/// Sender 0, possible receivers 1..l.
ChallengeShape default_shape(std::size_t l, std::size_t n);

/// Guesses blindly. Its advantage is zero against anything.
std::unique_ptr<GameAdversary> make_blind_guesser(ChallengeShape shape);

/// mc: corrupts the last possible receiver, challenges with all-zero vs
/// all-one messages and votes on the bit balance of the ciphertext it sees.
std::unique_ptr<GameAdversary> make_byte_frequency_adversary(ChallengeShape shape);

/// mc: looks for the message in the transcript in the clear.
std::unique_ptr<GameAdversary> make_read_off_adversary(ChallengeShape shape);

/// ra: corrupts the sender, then uses whatever the run reveals: published
/// receivers, else the position of the chosen key in the sender's arrival
/// order matched against the order of anonymous submissions.
std::unique_ptr<GameAdversary> make_best_transcript_adversary(ChallengeShape shape);

/// ra and f: always names the first possible receiver.
std::unique_ptr<GameAdversary> make_guess_first_adversary(ChallengeShape shape);

/// The adversaries a protocol has to beat to pass a game.
std::vector<std::unique_ptr<GameAdversary>> adversary_suite(GameKind game, const ChallengeShape& shape);

}  // namespace panini::games
