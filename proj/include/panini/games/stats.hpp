#pragma once

#include <cstdint>
#include <span>

namespace panini::stats {

struct ChiSquareResult {
  double statistic = 0;
  double dof = 0;
  double p_value = 1;
};

/// Upper tail P[X >= statistic] for X ~ chi-square(dof).
double chi_square_sf(double statistic, double dof);

/// Observed counts against expected category probabilities (summing to 1).
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probabilities);

/// Homogeneity test of two samples over the same categories. Categories that
/// are empty in both samples do not count towards the degrees of freedom.
ChiSquareResult chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// Standard deviation of a success frequency over `trials` Bernoulli(p) draws.
double binomial_sigma(double p, std::uint64_t trials);

}  // namespace panini::stats
