#pragma once

#include <cstdint>
#include <span>

namespace mlsbm {

/// log C(n, k); -inf when k > n.
double log_binom(std::uint64_t n, std::uint64_t k);

/// Exact C(n, k) as a signed 64-bit integer; throws on overflow.
std::int64_t binom_exact(std::uint64_t n, std::uint64_t k);

/// C(n, k) as a double (0 when k > n).
double binom(std::uint64_t n, std::uint64_t k);

/// log(sum exp(x)) over the span; -inf for an empty span.
double log_sum_exp(std::span<const double> xs);

}  // namespace mlsbm
