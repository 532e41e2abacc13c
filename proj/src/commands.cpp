#include "panini/commands.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "panini/games/matrix.hpp"

namespace panini::cli {

namespace {

const std::set<std::string> kConfigKeys = {"users",   "sender",    "possible", "n", "message", "message_hex",
                                           "corrupt", "adversary", "seed",     "T", "auth_latency", "key_timeout"};

bool non_negative(const nlohmann::json& v) { return v.is_number_integer() && v.get<std::int64_t>() >= 0; }

std::vector<net::UserId> id_list(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be a list of user ids");
  std::vector<net::UserId> out;
  for (const auto& v : j) {
    if (!non_negative(v)) throw ConfigError(std::string(what) + " must contain non-negative integers");
    out.push_back(net::UserId{v.get<std::uint32_t>()});
  }
  return out;
}

template <class T>
T unsigned_field(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  if (!non_negative(j[key])) throw ConfigError(std::string(key) + " must be a non-negative integer");
  return j[key].get<T>();
}

}  // namespace

SimulationConfig parse_simulation_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (kConfigKeys.count(k) == 0) throw ConfigError("unknown config key '" + k + "'");
  }
  SimulationConfig c;
  if (!j.contains("users")) throw ConfigError("config needs 'users'");
  if (non_negative(j["users"])) {
    const auto count = j["users"].get<std::uint32_t>();
    for (std::uint32_t i = 0; i < count; ++i) c.users.push_back(net::UserId{i});
  } else {
    c.users = id_list(j["users"], "users");
  }
  const std::set<net::UserId> known(c.users.begin(), c.users.end());
  if (known.size() != c.users.size()) throw ConfigError("duplicate user id");
  if (c.users.size() < 2) throw ConfigError("need at least two users");

  auto check_known = [&](net::UserId u) {
    if (known.count(u) == 0) throw ConfigError("unknown user " + net::to_string(u));
  };

  c.request.sender = net::UserId{unsigned_field<std::uint32_t>(j, "sender", c.users.front().value)};
  check_known(c.request.sender);
  if (j.contains("possible")) {
    c.request.possible = id_list(j["possible"], "possible");
    for (auto u : c.request.possible) check_known(u);
  } else {
    for (auto u : c.users)
      if (u != c.request.sender) c.request.possible.push_back(u);
  }
  c.request.n = unsigned_field<std::size_t>(j, "n", 1);

  if (j.contains("message") && j.contains("message_hex")) throw ConfigError("give message or message_hex, not both");
  if (j.contains("message")) {
    if (!j["message"].is_string()) throw ConfigError("message must be a string");
    c.request.message = to_bytes(j["message"].get<std::string>());
  } else if (j.contains("message_hex")) {
    if (!j["message_hex"].is_string()) throw ConfigError("message_hex must be a string");
    try {
      c.request.message = from_hex(j["message_hex"].get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(std::string("message_hex: ") + e.what());
    }
  } else {
    c.request.message = to_bytes("hello");
  }

  try {
    c.request.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (j.contains("corrupt")) {
    for (auto u : id_list(j["corrupt"], "corrupt")) {
      check_known(u);
      c.corrupted.users.insert(u);
    }
  }
  if (j.contains("adversary")) {
    if (!j["adversary"].is_array()) throw ConfigError("adversary must be a list of rules");
    c.adversary = j["adversary"];
  }
  c.seed = unsigned_field<std::uint64_t>(j, "seed", 0);
  c.network.mix_window = unsigned_field<net::Tick>(j, "T", c.network.mix_window);
  c.network.auth_latency = unsigned_field<net::Tick>(j, "auth_latency", c.network.auth_latency);
  if (c.network.mix_window == 0 || c.network.auth_latency == 0) throw ConfigError("T and auth_latency must be positive");
  c.key_timeout = unsigned_field<net::Tick>(j, "key_timeout", 0);
  return c;
}

SimulationRun simulate(const SimulationConfig& config) {
  const Rng master(config.seed);
  std::unique_ptr<protocol::ScriptedAdversary> adversary;
  try {
    adversary = std::make_unique<protocol::ScriptedAdversary>(config.adversary, master.derive("adversary").next_u64());
  } catch (const protocol::UnknownAdversaryAction&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  protocol::RunOptions opts;
  opts.network = config.network;
  opts.key_timeout = config.key_timeout;
  opts.corrupted = config.corrupted;
  opts.adversary = adversary.get();
  opts.seed = master.derive("run").next_u64();

  SimulationRun run{protocol::run_anycast(config.request, opts), {}};
  run.transcript_jsonl = net::to_jsonl(run.output.transcript);
  return run;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
  SimulationConfig config;
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config '" + config_path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    config = parse_simulation_config(j);
    if (seed) config.seed = *seed;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  SimulationRun run;
  try {
    run = simulate(config);
  } catch (const protocol::UnknownAdversaryAction& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnknownAction;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f) {
      err << "error: cannot write transcript to '" << out_path << "'\n";
      return kExitUsage;
    }
    f << run.transcript_jsonl;
  }
  nlohmann::json record = run.output.result.to_json();
  record["seed"] = config.seed;
  record["transcript"] = out_path;
  record["events"] = run.output.transcript.size();
  out << record.dump() << '\n';
  return protocol::exit_code(run.output.result.outcome);
}

int cmd_bench(const bench::BenchOptions& options, const std::string& csv_path, std::ostream& out, std::ostream& err) {
  bench::BenchReport report;
  try {
    report = bench::run_bench(options);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!csv_path.empty()) {
    std::ofstream f(csv_path, std::ios::trunc);
    if (!f) {
      err << "error: cannot write '" << csv_path << "'\n";
      return kExitUsage;
    }
    f << report.to_csv();
  }
  out << report.to_json().dump(2) << '\n';
  return kExitOk;
}

int cmd_game(const GameOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (options.rounds == 0) throw std::invalid_argument("rounds must be positive");
    if (options.game == "matrix") {
      games::MatrixConfig mc;
      mc.l = options.l != 0 ? options.l : 4;
      mc.n = options.n;
      mc.instances = options.rounds;
      mc.seed = options.seed;
      const auto report = games::run_matrix(mc);
      nlohmann::json j = report.to_json();
      const bool ok = report.matches_expected() && report.implication_holds();
      j["verdict"] = ok ? "PASS" : "FAIL";
      out << j.dump(2) << '\n';
      return ok ? kExitOk : kExitVerdictFail;
    }

    const games::GameKind kind = games::parse_game(options.game);
    auto protocol = games::make_protocol(options.protocol);
    const std::size_t l = options.l != 0 ? options.l : (kind == games::GameKind::MessageConfidentiality ? 4 : 8);
    if (options.n == 0 || options.n > l) throw std::invalid_argument("n must satisfy 1 <= n <= l");
    const auto shape = games::default_shape(l, options.n);
    const auto verdict = games::run_suite(kind, *protocol, shape, {options.rounds, options.seed, 64});

    // Headline numbers come from the adversary furthest from its baseline.
    const games::AdvantageEstimate* top = &verdict.estimates.front();
    auto z = [](const games::AdvantageEstimate& e) {
      return e.sigma > 0 ? std::abs(e.advantage) / e.sigma : (e.advantage != 0 ? INFINITY : 0.0);
    };
    for (const auto& e : verdict.estimates)
      if (z(e) > z(*top)) top = &e;
    nlohmann::json j = top->to_json();
    j["verdict"] = verdict.pass ? "PASS" : "FAIL";
    j["l"] = l;
    j["n"] = options.n;
    j["adversaries"] = verdict.to_json()["adversaries"];
    out << j.dump(2) << '\n';
    return verdict.pass ? kExitOk : kExitVerdictFail;
  } catch (const games::InvalidGameAction& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace panini::cli
