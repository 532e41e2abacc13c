// panini: simulate one anycast, run the privacy games, or benchmark the steps.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "panini/commands.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anonymous anycast simulator, privacy games and benchmarks"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;

  auto* sim = app.add_subcommand("simulate", "Run one anycast under a scripted adversary");
  std::string config_path;
  std::string transcript_path = "transcript.jsonl";
  std::optional<std::uint64_t> sim_seed;
  sim->add_option("--config", config_path, "Simulation config (JSON)")->required();
  sim->add_option("--seed", sim_seed, "Overrides the seed in the config");
  sim->add_option("--out", transcript_path, "Transcript output (line-delimited JSON)");

  auto* bench = app.add_subcommand("bench", "Time the protocol steps for growing ring sizes");
  std::string receivers = "10,20,40";
  std::string steps = "KG,SIG,VER,LINK,S&E,D&C";
  std::size_t reps = 100;
  std::string csv_path;
  bench->add_option("--receivers", receivers, "Comma-separated ring sizes");
  bench->add_option("--steps", steps, "Comma-separated steps");
  bench->add_option("--reps", reps, "Timed repetitions per step and ring size");
  bench->add_option("--out", csv_path, "CSV output");
  bench->add_option("--seed", seed, "Seed for keys and messages");

  auto* game = app.add_subcommand("game", "Run a privacy game suite");
  panini::cli::GameOptions gopts;
  game->add_option("game", gopts.game, "mc, ra, f or matrix")->required();
  game->add_option("--protocol", gopts.protocol, "panini, p1, p2, p5 or ideal")->default_val("panini");
  game->add_option("--rounds", gopts.rounds, "Game instances per adversary");
  game->add_option("--seed", gopts.seed, "Seed");
  game->add_option("--possible", gopts.l, "Number of possible receivers");
  game->add_option("--actual", gopts.n, "Number of actual receivers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : panini::cli::kExitUsage;
  }

  if (*sim) return panini::cli::cmd_simulate(config_path, sim_seed, transcript_path, std::cout, std::cerr);

  if (*bench) {
    panini::bench::BenchOptions opts;
    opts.repetitions = reps;
    opts.seed = seed;
    try {
      opts.steps.clear();
      for (const auto& s : split_csv(steps)) opts.steps.push_back(panini::bench::parse_step(s));
      opts.receivers.clear();
      for (const auto& r : split_csv(receivers)) opts.receivers.push_back(std::stoul(r));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return panini::cli::kExitUsage;
    }
    return panini::cli::cmd_bench(opts, csv_path, std::cout, std::cerr);
  }

  return panini::cli::cmd_game(gopts, std::cout, std::cerr);
}
