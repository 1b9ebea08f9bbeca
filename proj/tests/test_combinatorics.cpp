#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "mlsbm/combinatorics.hpp"

using namespace mlsbm;

TEST_CASE("exact binomials") {
  CHECK(binom_exact(0, 0) == 1);
  CHECK(binom_exact(6, 3) == 20);
  CHECK(binom_exact(60, 30) == 118264581564861424LL);
  CHECK(binom_exact(5, 7) == 0);
  CHECK_THROWS(binom_exact(100, 50));
}

TEST_CASE("log binomials agree with exact values and Pascal's rule") {
  for (std::uint64_t n = 0; n <= 60; ++n)
    for (std::uint64_t k = 0; k <= n; ++k)
      CHECK(log_binom(n, k) == doctest::Approx(std::log(double(binom_exact(n, k)))).epsilon(1e-13));
  for (std::uint64_t n : {100u, 1000u, 4950u})
    for (std::uint64_t k : {1u, 7u, 40u}) {
      double lhs = std::exp(log_binom(n + 1, k + 1) - log_binom(n, k));
      double rhs = 1.0 + std::exp(log_binom(n, k + 1) - log_binom(n, k));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  CHECK(log_binom(3, 4) == -std::numeric_limits<double>::infinity());
  CHECK(binom(3, 4) == 0.0);
  CHECK(binom(40, 20) == 137846528820.0);
}

TEST_CASE("log-sum-exp") {
  std::vector<double> xs{1000.0, 1000.0};
  CHECK(log_sum_exp(xs) == doctest::Approx(1000.0 + std::log(2.0)));
  std::vector<double> small{std::log(0.25), std::log(0.5)};
  CHECK(log_sum_exp(small) == doctest::Approx(std::log(0.75)));
  CHECK(log_sum_exp({}) == -std::numeric_limits<double>::infinity());
}
