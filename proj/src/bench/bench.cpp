#include "panini/bench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "panini/crypto/cipher.hpp"
#include "panini/crypto/lrs.hpp"

namespace panini::bench {

namespace {

// Keeps results observable so the timed bodies cannot be optimized away.
volatile std::uint64_t g_sink = 0;

struct Fixture {
  lrs::PublicParams pp;
  std::vector<lrs::KeyPair> members;
  lrs::Ring ring;
  std::vector<cipher::SymmetricKey> keys;
  std::vector<Bytes> signatures;
  std::vector<lrs::Signature> parsed;
  Bytes message;
  cipher::Ciphertext ciphertext;
};

lrs::Ring ring_of(const std::vector<lrs::KeyPair>& kps) {
  std::vector<lrs::VerificationKey> vks;
  for (const auto& kp : kps) vks.push_back(kp.vk);
  return lrs::Ring(std::move(vks));
}

Fixture make_fixture(std::size_t l, std::size_t message_bytes, Rng& rng) {
  const auto pp = lrs::setup(lrs::kSecurityBits);
  std::vector<lrs::KeyPair> members;
  for (std::size_t i = 0; i < l; ++i) members.push_back(lrs::keygen(pp, rng));
  lrs::Ring ring = ring_of(members);
  Fixture f{pp, members, ring, {}, {}, {}, rng.bytes(message_bytes), {}};
  for (const auto& kp : f.members) {
    f.keys.push_back(cipher::keygen(rng));
    f.parsed.push_back(lrs::sign(kp.sk, f.keys.back().bytes, f.ring, rng));
    f.signatures.push_back(f.parsed.back().serialize());
  }
  f.ciphertext = cipher::encrypt(cipher::tagged(f.message), f.keys.front(), rng);
  return f;
}

std::function<void()> body(Step step, Fixture& f, Rng& rng) {
  switch (step) {
    case Step::KG:
      return [&] { g_sink = g_sink + lrs::keygen(f.pp, rng).vk.bytes[1]; };
    case Step::SIG:
      return [&] {
        const auto k = cipher::keygen(rng);
        g_sink = g_sink + lrs::sign(f.members.front().sk, k.bytes, f.ring, rng).challenge[0];
      };
    case Step::VER:
      return [&] {
        std::uint64_t ok = 0;
        for (std::size_t i = 0; i < f.keys.size(); ++i) ok += lrs::verify(f.signatures[i], f.keys[i].bytes, f.ring);
        g_sink = g_sink + ok;
      };
    case Step::LINK:
      return [&] {
        std::uint64_t linked = 0;
        for (std::size_t i = 0; i < f.parsed.size(); ++i)
          for (std::size_t j = i + 1; j < f.parsed.size(); ++j) linked += lrs::link(f.parsed[i], f.parsed[j]);
        g_sink = g_sink + linked;
      };
    case Step::SE:
      return [&] {
        const auto& k = f.keys[rng.uniform(f.keys.size())];
        g_sink = g_sink + cipher::encrypt(cipher::tagged(f.message), k, rng).body.size();
      };
    case Step::DC:
      return [&] { g_sink = g_sink + cipher::decrypt(f.ciphertext, f.keys.front()).tag_matches(); };
  }
  throw std::logic_error("unknown step");
}

}  // namespace

std::string_view to_string(Step s) {
  switch (s) {
    case Step::KG: return "KG";
    case Step::SIG: return "SIG";
    case Step::VER: return "VER";
    case Step::LINK: return "LINK";
    case Step::SE: return "S&E";
    case Step::DC: return "D&C";
  }
  return "?";
}

Step parse_step(std::string_view name) {
  if (name == "KG") return Step::KG;
  if (name == "SIG") return Step::SIG;
  if (name == "VER") return Step::VER;
  if (name == "LINK") return Step::LINK;
  if (name == "S&E" || name == "SE") return Step::SE;
  if (name == "D&C" || name == "DC") return Step::DC;
  throw std::invalid_argument("unknown benchmark step '" + std::string(name) + "'");
}

std::vector<Step> all_steps() { return {Step::KG, Step::SIG, Step::VER, Step::LINK, Step::SE, Step::DC}; }

std::string BenchReport::to_csv() const {
  std::ostringstream out;
  out.precision(12);
  out << "step,l,mean_ns,stddev_ns,repetitions\n";
  for (const auto& r : results) {
    out << to_string(r.step) << ',' << r.l << ',' << r.mean_ns << ',';
    if (!std::isnan(r.stddev_ns)) out << r.stddev_ns;
    out << ',' << r.repetitions << '\n';
  }
  return out.str();
}

nlohmann::json BenchReport::to_json() const {
  auto res = nlohmann::json::array();
  for (const auto& r : results) {
    res.push_back({{"step", to_string(r.step)},
                   {"l", r.l},
                   {"mean_ns", r.mean_ns},
                   {"stddev_ns", std::isnan(r.stddev_ns) ? nlohmann::json() : nlohmann::json(r.stddev_ns)},
                   {"repetitions", r.repetitions}});
  }
  auto rat = nlohmann::json::array();
  for (const auto& r : ratios)
    rat.push_back({{"step", to_string(r.step)}, {"from_l", r.from_l}, {"to_l", r.to_l}, {"ratio", r.ratio}});
  return {{"results", res}, {"ratios", rat}};
}

BenchReport run_bench(const BenchOptions& options) {
  if (options.receivers.empty()) throw std::invalid_argument("need at least one receiver count");
  if (options.repetitions == 0) throw std::invalid_argument("need at least one repetition");
  if (std::find(options.receivers.begin(), options.receivers.end(), 0) != options.receivers.end())
    throw std::invalid_argument("receiver counts must be positive");

  std::vector<std::size_t> ls = options.receivers;
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());

  BenchReport report;
  const Rng master(options.seed);
  for (Step step : options.steps) {
    std::vector<Rng> rngs;
    std::vector<Fixture> fixtures;
    rngs.reserve(ls.size());
    fixtures.reserve(ls.size());
    for (std::size_t l : ls) {
      rngs.push_back(master.derive(std::string("bench/") + std::string(to_string(step)), l));
      fixtures.push_back(make_fixture(l, options.message_bytes, rngs.back()));
    }
    std::vector<std::function<void()>> runs;
    for (std::size_t k = 0; k < ls.size(); ++k) runs.push_back(body(step, fixtures[k], rngs[k]));
    for (auto& run : runs)
      for (std::size_t i = 0; i < options.warmup; ++i) run();

    // Ring sizes take turns within each repetition, so slow drift in machine
    // speed lands on all of them alike instead of skewing the ratios.
    std::vector<std::vector<double>> samples(ls.size());
    for (auto& v : samples) v.reserve(options.repetitions);
    for (std::size_t i = 0; i < options.repetitions; ++i) {
      for (std::size_t j = 0; j < ls.size(); ++j) {
        const std::size_t k = (i + j) % ls.size();
        const auto t0 = std::chrono::steady_clock::now();
        runs[k]();
        const auto t1 = std::chrono::steady_clock::now();
        samples[k].push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
      }
    }

    for (std::size_t k = 0; k < ls.size(); ++k) {
      const auto& xs = samples[k];
      double mean = 0;
      for (double x : xs) mean += x;
      mean /= static_cast<double>(xs.size());
      double sd = std::numeric_limits<double>::quiet_NaN();
      if (xs.size() >= kMinRepetitionsForSigma) {
        double acc = 0;
        for (double x : xs) acc += (x - mean) * (x - mean);
        sd = std::sqrt(acc / static_cast<double>(xs.size() - 1));
      }
      report.results.push_back({step, ls[k], mean, sd, xs.size()});
    }
    for (std::size_t i = report.results.size() - ls.size() + 1; i < report.results.size(); ++i) {
      const auto& a = report.results[i - 1];
      const auto& b = report.results[i];
      report.ratios.push_back({step, a.l, b.l, b.mean_ns / a.mean_ns});
    }
  }
  return report;
}

}  // namespace panini::bench
