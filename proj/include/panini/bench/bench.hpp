#pragma once

// Per-step microbenchmarks for growing ring sizes.
//
//   KG    one signature keypair
//   SIG   ephemeral key generation plus signing it under a ring of l
//   VER   verifying all l signatures
//   LINK  the link check over all unordered signature pairs
//   S&E   selecting a key and encrypting the message
//   D&C   decrypting and comparing the tag

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace panini::bench {

enum class Step { KG, SIG, VER, LINK, SE, DC };

std::string_view to_string(Step s);
/// Accepts KG, SIG, VER, LINK, S&E (or SE), D&C (or DC). Throws std::invalid_argument otherwise.
Step parse_step(std::string_view name);
std::vector<Step> all_steps();

struct StepResult {
  Step step = Step::KG;
  std::size_t l = 0;
  double mean_ns = 0;
  double stddev_ns = 0;  // NaN below the minimum repetition count
  std::size_t repetitions = 0;
};

/// mean(l_next) / mean(l) for consecutive receiver counts.
struct Ratio {
  Step step = Step::KG;
  std::size_t from_l = 0;
  std::size_t to_l = 0;
  double ratio = 0;
};

struct BenchReport {
  std::vector<StepResult> results;
  std::vector<Ratio> ratios;

  /// step,l,mean_ns,stddev_ns,repetitions
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

struct BenchOptions {
  std::vector<Step> steps = all_steps();
  std::vector<std::size_t> receivers = {10, 20, 40};
  std::size_t repetitions = 100;
  std::size_t warmup = 10;
  std::size_t message_bytes = 1024;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kMinRepetitionsForSigma = 30;

/// Throws std::invalid_argument on an empty receiver list or zero repetitions.
BenchReport run_bench(const BenchOptions& options);

}  // namespace panini::bench
