#include "panini/games/matrix.hpp"

namespace panini::games {

nlohmann::json SuiteVerdict::to_json() const {
  auto list = nlohmann::json::array();
  for (const auto& e : estimates) list.push_back(e.to_json());
  return {{"game", to_string(game)}, {"verdict", pass ? "PASS" : "FAIL"}, {"adversaries", list}};
}

SuiteVerdict run_suite(GameKind game, AnycastProtocol& protocol, const ChallengeShape& shape,
                       const GameConfig& config) {
  SuiteVerdict v;
  v.game = game;
  std::uint64_t salt = 0;
  for (auto& adversary : adversary_suite(game, shape)) {
    GameConfig c = config;
    c.seed = config.seed * 1000003 + salt++;
    v.estimates.push_back(play(game, protocol, *adversary, c));
    if (!v.estimates.back().negligible()) v.pass = false;
  }
  return v;
}

std::vector<Expectation> expected_verdicts() {
  using G = GameKind;
  return {
      {"panini", G::MessageConfidentiality, true}, {"panini", G::ReceiverAnonymity, true},
      {"panini", G::Fairness, true},               {"p1", G::MessageConfidentiality, false},
      {"p1", G::Fairness, true},                   {"p2", G::MessageConfidentiality, true},
      {"p2", G::Fairness, false},                  {"p2", G::ReceiverAnonymity, false},
      {"p5", G::Fairness, true},                   {"p5", G::ReceiverAnonymity, false},
  };
}

std::optional<bool> MatrixReport::verdict(const std::string& protocol, GameKind game) const {
  auto row = rows.find(protocol);
  if (row == rows.end()) return std::nullopt;
  auto cell = row->second.find(game);
  if (cell == row->second.end()) return std::nullopt;
  return cell->second.pass;
}

nlohmann::json MatrixReport::to_json() const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [name, cells] : rows) {
    nlohmann::json row = nlohmann::json::object();
    for (const auto& [game, v] : cells) row[std::string(to_string(game))] = v.to_json();
    out["protocols"][name] = row;
  }
  out["mismatches"] = mismatches;
  out["ra_without_f"] = ra_without_f;
  out["matches_expected"] = matches_expected();
  out["implication_holds"] = implication_holds();
  return out;
}

MatrixReport run_matrix(const MatrixConfig& config) {
  MatrixReport report;
  const ChallengeShape shape = default_shape(config.l, config.n);
  std::uint64_t salt = 0;
  for (const auto& name : config.protocols) {
    auto protocol = make_protocol(name);
    for (GameKind g : {GameKind::MessageConfidentiality, GameKind::ReceiverAnonymity, GameKind::Fairness}) {
      GameConfig gc{config.instances, config.seed + 7919 * salt++, 64};
      report.rows[name][g] = run_suite(g, *protocol, shape, gc);
    }
  }
  for (const auto& e : expected_verdicts()) {
    auto got = report.verdict(e.protocol, e.game);
    if (got && *got != e.pass) {
      report.mismatches.push_back(e.protocol + "/" + std::string(to_string(e.game)) + ": expected " +
                                  (e.pass ? "PASS" : "FAIL"));
    }
  }
  for (const auto& [name, cells] : report.rows) {
    if (cells.at(GameKind::ReceiverAnonymity).pass && !cells.at(GameKind::Fairness).pass)
      report.ra_without_f.push_back(name);
  }
  return report;
}

}  // namespace panini::games
