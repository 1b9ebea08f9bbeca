#include "mlsbm/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mlsbm {

double log_binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  if (k == 0 || k == n) return 0.0;
  if (n <= 60) return std::log(static_cast<double>(binom_exact(n, k)));
  const auto dn = static_cast<double>(n), dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
}

std::int64_t binom_exact(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<__int128>(n - k + i) / static_cast<__int128>(i);
    if (acc > std::numeric_limits<std::int64_t>::max()) throw std::overflow_error("binom_exact overflow");
  }
  return static_cast<std::int64_t>(acc);
}

double binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  if (n <= 60) return static_cast<double>(binom_exact(n, k));
  return std::exp(log_binom(n, k));
}

double log_sum_exp(std::span<const double> xs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : xs) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - hi);
  return hi + std::log(s);
}

}  // namespace mlsbm
