#pragma once

// Runs every game suite against a set of protocols and checks the verdicts
// against the known pattern and against "ra implies f".

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "panini/games/adversaries.hpp"

namespace panini::games {

struct SuiteVerdict {
  GameKind game = GameKind::MessageConfidentiality;
  bool pass = true;  // no adversary in the suite had a significant advantage
  std::vector<AdvantageEstimate> estimates;

  nlohmann::json to_json() const;
};

SuiteVerdict run_suite(GameKind game, AnycastProtocol& protocol, const ChallengeShape& shape,
                       const GameConfig& config);

struct MatrixConfig {
  std::size_t l = 4;
  std::size_t n = 1;
  std::size_t instances = 1000;
  std::uint64_t seed = 1;
  std::vector<std::string> protocols = {"panini", "p1", "p2", "p5"};
};

/// Known verdicts. Cells not listed are not constrained.
struct Expectation {
  std::string protocol;
  GameKind game;
  bool pass;
};
std::vector<Expectation> expected_verdicts();

struct MatrixReport {
  std::map<std::string, std::map<GameKind, SuiteVerdict>> rows;
  std::vector<std::string> mismatches;       // expectation cells that came out differently
  std::vector<std::string> ra_without_f;     // protocols passing ra but failing f

  bool matches_expected() const { return mismatches.empty(); }
  bool implication_holds() const { return ra_without_f.empty(); }
  std::optional<bool> verdict(const std::string& protocol, GameKind game) const;
  nlohmann::json to_json() const;
};

MatrixReport run_matrix(const MatrixConfig& config);

}  // namespace panini::games
