#include "panini/games/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace panini::stats {

double chi_square_sf(double statistic, double dof) {
  if (dof <= 0) throw std::invalid_argument("chi-square needs positive degrees of freedom");
  if (statistic <= 0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), statistic));
}

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probabilities) {
  if (observed.size() != probabilities.size() || observed.size() < 2)
    throw std::invalid_argument("goodness of fit needs matching category counts (at least two)");
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (total == 0) throw std::invalid_argument("goodness of fit needs at least one observation");
  ChiSquareResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * probabilities[i];
    if (e <= 0) throw std::invalid_argument("expected category probability must be positive");
    const double d = static_cast<double>(observed[i]) - e;
    r.statistic += d * d / e;
  }
  r.dof = static_cast<double>(observed.size() - 1);
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

ChiSquareResult chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("samples must share categories");
  const double na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::uint64_t{0}));
  const double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::uint64_t{0}));
  if (na == 0 || nb == 0) throw std::invalid_argument("both samples need observations");
  const double n = na + nb;
  ChiSquareResult r;
  std::size_t used = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double col = static_cast<double>(a[i] + b[i]);
    if (col == 0) continue;
    ++used;
    const double ea = na * col / n;
    const double eb = nb * col / n;
    const double da = static_cast<double>(a[i]) - ea;
    const double db = static_cast<double>(b[i]) - eb;
    r.statistic += da * da / ea + db * db / eb;
  }
  if (used < 2) return r;
  r.dof = static_cast<double>(used - 1);
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

double binomial_sigma(double p, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("no trials");
  return std::sqrt(p * (1 - p) / static_cast<double>(trials));
}

}  // namespace panini::stats
