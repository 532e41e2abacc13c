// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any fails.
// Usage: acceptance [criterion...]   (default: all of 1-10)

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "panini/bench/bench.hpp"
#include "panini/crypto/lrs.hpp"
#include "panini/games/matrix.hpp"
#include "panini/games/stats.hpp"

namespace fs = std::filesystem;
using namespace panini;
using namespace panini::games;

namespace {

const std::string kCli = PANINI_CLI_PATH;
const fs::path kConfigs = PANINI_CONFIG_DIR;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

AnycastRequest request(std::size_t l, std::size_t n) {
  AnycastRequest r{UserId{0}, to_bytes("acceptance"), n, {}};
  for (std::uint32_t i = 1; i <= l; ++i) r.possible.push_back(UserId{i});
  return r;
}

int run_cli(const std::string& args) {
  const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "panini-acceptance";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict correctness() {
  constexpr std::size_t kRuns = 60000;
  const auto req = request(4, 2);
  std::map<std::set<UserId>, std::size_t> index;
  std::vector<std::uint64_t> real(6, 0), ideal(6, 0);
  auto slot = [&](const std::set<UserId>& s) {
    auto [it, fresh] = index.emplace(s, index.size());
    if (index.size() > 6) throw std::logic_error("more than six subsets");
    return it->second;
  };
  auto panini = make_panini();
  std::size_t failed = 0;
  for (std::uint64_t i = 0; i < kRuns; ++i) {
    const auto e = panini->execute(req, {}, i);
    if (e.outcome != protocol::Outcome::Delivered || e.actual.size() != 2) {
      ++failed;
      continue;
    }
    ++real[slot(e.actual)];
  }
  Rng rng(0x1dea1);
  for (std::size_t i = 0; i < kRuns; ++i) ++ideal[slot(ideal_anycast(req, rng))];
  const auto chi = stats::chi_square_two_sample(real, ideal);
  return {failed == 0 && chi.p_value > 0.01,
          "chi2=" + fmt(chi.statistic) + " p=" + fmt(chi.p_value) + " failed_runs=" + std::to_string(failed)};
}

Verdict fairness() {
  constexpr std::size_t kRuns = 10000;
  const auto req = request(8, 1);
  std::map<UserId, std::uint64_t> counts;
  auto panini = make_panini();
  for (std::uint64_t i = 0; i < kRuns; ++i) {
    const auto e = panini->execute(req, {}, 1'000'000 + i);
    for (UserId u : e.actual) ++counts[u];
  }
  const double sigma = stats::binomial_sigma(0.125, kRuns);
  bool ok = true;
  std::string detail;
  for (UserId u : req.possible) {
    const double f = static_cast<double>(counts[u]) / kRuns;
    ok = ok && std::abs(f - 0.125) <= 3 * sigma;
    detail += std::to_string(u.value) + ":" + fmt(f) + " ";
  }
  return {ok, detail + "3sigma=" + fmt(3 * sigma)};
}

Verdict fairness_game() {
  const auto shape = default_shape(8, 1);
  auto panini = make_panini();
  auto p2 = make_protocol("p2");
  auto a = make_guess_first_adversary(shape);
  const auto vs_panini = play(GameKind::Fairness, *panini, *a, {8000, 31, 64});
  auto b = make_guess_first_adversary(shape);
  const auto vs_p2 = play(GameKind::Fairness, *p2, *b, {8000, 32, 64});
  const double rate = static_cast<double>(vs_panini.wins) / 8000;
  const double p2_rate = static_cast<double>(vs_p2.wins) / 8000;
  return {vs_panini.negligible() && p2_rate >= 0.99,
          "panini win=" + fmt(rate) + " (1/8 +- " + fmt(3 * vs_panini.sigma) + ") p2 win=" + fmt(p2_rate)};
}

Verdict anonymity_game() {
  const auto shape = default_shape(8, 1);
  auto panini = make_panini();
  auto p5 = make_protocol("p5");
  auto a = make_best_transcript_adversary(shape);
  const auto vs_panini = play(GameKind::ReceiverAnonymity, *panini, *a, {4000, 41, 64});
  auto b = make_best_transcript_adversary(shape);
  const auto vs_p5 = play(GameKind::ReceiverAnonymity, *p5, *b, {4000, 42, 64});
  return {std::abs(vs_panini.advantage) < 0.05 && vs_panini.negligible() && vs_p5.wins == vs_p5.trials,
          "panini adv=" + fmt(vs_panini.advantage) + " 3sigma=" + fmt(3 * vs_panini.sigma) +
              " p5 wins=" + std::to_string(vs_p5.wins) + "/" + std::to_string(vs_p5.trials)};
}

Verdict confidentiality_game() {
  const auto shape = default_shape(4, 1);
  auto panini = make_panini();
  auto p1 = make_protocol("p1");
  auto a = make_byte_frequency_adversary(shape);
  const auto vs_panini = play(GameKind::MessageConfidentiality, *panini, *a, {2000, 51, 64});
  auto b = make_read_off_adversary(shape);
  const auto vs_p1 = play(GameKind::MessageConfidentiality, *p1, *b, {2000, 52, 64});
  const double p1_rate = static_cast<double>(vs_p1.wins) / static_cast<double>(vs_p1.trials);
  return {std::abs(vs_panini.advantage) < 0.05 && vs_panini.negligible() && p1_rate >= 0.99,
          "panini adv=" + fmt(vs_panini.advantage) + " 3sigma=" + fmt(3 * vs_panini.sigma) +
              " p1 win=" + fmt(p1_rate)};
}

Verdict implication_matrix() {
  const auto report = run_matrix(MatrixConfig{});
  std::string detail;
  for (const auto& [name, row] : report.rows) {
    detail += name + "[";
    for (const auto& [game, v] : row) detail += std::string(to_string(game)) + (v.pass ? "+" : "-");
    detail += "] ";
  }
  for (const auto& m : report.mismatches) detail += "mismatch:" + m + " ";
  for (const auto& m : report.ra_without_f) detail += "ra_without_f:" + m + " ";
  return {report.matches_expected() && report.implication_holds(), detail};
}

Verdict attack_aborts() {
  const std::vector<std::pair<std::string, int>> attacks = {
      {"invalid_signature", 10}, {"duplicate_key", 11}, {"linked_keys", 12}, {"timeout", 13}, {"modified_auth", 14}};
  bool ok = true;
  std::set<int> codes;
  std::string detail;
  for (const auto& [name, code] : attacks) {
    codes.insert(code);
    std::size_t hits = 0;
    for (int seed = 1; seed <= 100; ++seed) {
      const auto cfg = kConfigs / (name + ".json");
      if (run_cli("simulate --config " + cfg.string() + " --seed " + std::to_string(seed) + " --out " +
                  scratch(name + ".jsonl").string()) == code)
        ++hits;
    }
    ok = ok && hits == 100;
    detail += name + "=" + std::to_string(hits) + "/100 ";
  }
  return {ok && codes.size() == attacks.size() && !codes.count(0), detail};
}

Verdict signature_suite() {
  Rng rng(0x516);
  const auto pp = lrs::setup(lrs::kSecurityBits);
  std::size_t signed_count = 0, complete_failures = 0;
  for (std::size_t l = 1; l <= 64; ++l) {
    std::vector<lrs::KeyPair> kps;
    std::vector<lrs::VerificationKey> vks;
    for (std::size_t i = 0; i < l; ++i) {
      kps.push_back(lrs::keygen(pp, rng));
      vks.push_back(kps.back().vk);
    }
    const lrs::Ring ring(vks);
    for (const auto& kp : kps) {
      const Bytes msg = rng.bytes(33);
      ++signed_count;
      if (!lrs::verify(lrs::sign(kp.sk, msg, ring, rng).serialize(), msg, ring)) ++complete_failures;
    }
  }

  std::vector<lrs::KeyPair> pool;
  std::vector<lrs::VerificationKey> pool_vks;
  for (int i = 0; i < 8; ++i) {
    pool.push_back(lrs::keygen(pp, rng));
    pool_vks.push_back(pool.back().vk);
  }
  const lrs::Ring ring(pool_vks);
  const Bytes msg = to_bytes("bit flip target");
  const Bytes sig = lrs::sign(pool[3].sk, msg, ring, rng).serialize();
  std::size_t flips = 0, accepted = 0;
  for (std::size_t i = 0; i < sig.size(); ++i)
    for (int bit = 0; bit < 8; ++bit) {
      Bytes t = sig;
      t[i] ^= static_cast<std::uint8_t>(1u << bit);
      ++flips;
      if (lrs::verify(t, msg, ring)) ++accepted;
    }

  std::size_t link_errors = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t a = rng.uniform(pool.size());
    const std::size_t b = (i % 2 == 0) ? a : rng.uniform(pool.size());
    const auto sa = lrs::sign(pool[a].sk, rng.bytes(16), ring, rng);
    const auto sb = lrs::sign(pool[b].sk, rng.bytes(16), ring, rng);
    if (lrs::link(sa, sb) != (a == b)) ++link_errors;
  }
  return {complete_failures == 0 && accepted == 0 && link_errors == 0,
          "complete " + std::to_string(signed_count - complete_failures) + "/" + std::to_string(signed_count) +
              ", flips accepted " + std::to_string(accepted) + "/" + std::to_string(flips) + ", link errors " +
              std::to_string(link_errors) + "/100"};
}

Verdict bench_scaling() {
  bench::BenchOptions opts;
  opts.seed = 9;
  const auto report = bench::run_bench(opts);
  const std::map<bench::Step, std::pair<double, double>> bounds = {
      {bench::Step::SIG, {1.6, 2.4}},
      {bench::Step::VER, {3.0, 5.0}},
      {bench::Step::KG, {0.8, 1.25}},
      {bench::Step::DC, {0.7, 1.4}},
      {bench::Step::LINK, {2.0, INFINITY}}};
  bool ok = true;
  std::string detail;
  for (const auto& r : report.ratios) {
    auto it = bounds.find(r.step);
    if (it == bounds.end()) continue;
    const auto [lo, hi] = it->second;
    const bool in = r.step == bench::Step::LINK ? r.ratio > lo : (r.ratio >= lo && r.ratio <= hi);
    ok = ok && in;
    detail += std::string(bench::to_string(r.step)) + " " + std::to_string(r.from_l) + "->" +
              std::to_string(r.to_l) + "=" + fmt(r.ratio) + (in ? " " : "! ");
  }
  return {ok, detail};
}

Verdict determinism() {
  const auto cfg = kConfigs / "honest.json";
  const auto a = scratch("det_a.jsonl"), b = scratch("det_b.jsonl");
  const std::string base = "simulate --config " + cfg.string() + " --seed 2024 --out ";
  const int ca = run_cli(base + a.string());
  const int cb = run_cli(base + b.string());
  const std::string ta = slurp(a), tb = slurp(b);
  return {ca == 0 && cb == 0 && !ta.empty() && ta == tb,
          "exit " + std::to_string(ca) + "/" + std::to_string(cb) + ", " + std::to_string(ta.size()) + " bytes, " +
              (ta == tb ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"correctness vs ideal functionality (l=4, n=2, 60000 runs)", correctness},
      {"fairness of selection (l=8, n=1, 10000 runs)", fairness},
      {"fairness game: guess-first vs panini and p2", fairness_game},
      {"anonymity game: best-transcript vs panini and p5", anonymity_game},
      {"confidentiality game: byte-frequency vs panini, read-off vs p1", confidentiality_game},
      {"implication matrix", implication_matrix},
      {"active attacks abort with distinct exit codes", attack_aborts},
      {"signature completeness, bit flips and linking", signature_suite},
      {"benchmark scaling ratios", bench_scaling},
      {"deterministic transcripts", determinism},
  };

  std::set<std::size_t> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoul(argv[i]));

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected.empty() && !selected.count(i + 1)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first << " | " << v.detail
              << " | " << fmt(secs) << "s" << std::endl;
  }
  return all ? 0 : 1;
}
