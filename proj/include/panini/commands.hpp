#pragma once

// Subcommand implementations behind the panini executable. Each returns the
// process exit code.

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "panini/bench/bench.hpp"
#include "panini/protocol/simulation.hpp"

namespace panini::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdictFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUnknownAction = 3;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulation config file:
///   {"users": 4, "sender": 0, "possible": [1, 2, 3], "n": 1,
///    "message": "hello" | "message_hex": "68656c6c6f",
///    "corrupt": [2], "adversary": [rules], "seed": 7,
///    "T": 100, "auth_latency": 1, "key_timeout": 200}
/// `users` is a count (ids 0..users-1) or an explicit id list. Everything
/// but `users` is optional; `possible` defaults to all users but the sender.
struct SimulationConfig {
  std::vector<net::UserId> users;
  protocol::AnycastRequest request;
  net::CorruptionSet corrupted;
  net::NetworkConfig network;
  net::Tick key_timeout = 0;
  nlohmann::json adversary = nlohmann::json::array();
  std::uint64_t seed = 0;
};

/// Throws ConfigError on anything malformed.
SimulationConfig parse_simulation_config(const nlohmann::json& j);

struct SimulationRun {
  protocol::RunOutput output;
  std::string transcript_jsonl;
};

/// Throws protocol::UnknownAdversaryAction or ConfigError.
SimulationRun simulate(const SimulationConfig& config);

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out_path,
                 std::ostream& out, std::ostream& err);

/// Writes the CSV to csv_path (if non-empty) and the JSON report to `out`.
int cmd_bench(const bench::BenchOptions& options, const std::string& csv_path, std::ostream& out, std::ostream& err);

struct GameOptions {
  std::string game;      // mc, ra, f, matrix
  std::string protocol;  // panini, p1, p2, p5, ideal; ignored for matrix
  std::size_t rounds = 1000;
  std::uint64_t seed = 0;
  std::size_t l = 0;  // 0: 4 for mc and matrix, 8 otherwise
  std::size_t n = 1;
};

/// Prints the JSON report; exit 0 on PASS, 1 on FAIL, 2 on an invalid combination.
int cmd_game(const GameOptions& options, std::ostream& out, std::ostream& err);

}  // namespace panini::cli
