#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "mlsbm/combinatorics.hpp"
#include "mlsbm/errors.hpp"
#include "mlsbm/theory.hpp"
#include "support.hpp"

using namespace mlsbm;
using namespace mlsbm::theory;
using testing::rel_close;

namespace {

// sum_{sigma1, sigma2} prod_slots sum_x p1(x) p2(x) / p0(x), averaged, minus 1.
double chi_square_pair_oracle(std::size_t n, std::size_t T, double rho, const Assignment& tau) {
  const auto sigmas = enumerate_assignments(n);
  long double total = 0.0L;
  for (const auto& s1 : sigmas)
    for (const auto& s2 : sigmas) {
      long double prod = 1.0L;
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j) {
            long double p = edge_probability(s1[i], s1[j], tau[t], rho);
            long double q = edge_probability(s2[i], s2[j], tau[t], rho);
            prod *= p * q / rho + (1 - p) * (1 - q) / (1 - rho);
          }
      total += prod;
    }
  return static_cast<double>(total / (static_cast<long double>(sigmas.size()) * sigmas.size()) - 1.0L);
}

// Lambda census by explicit per-node / per-layer appearance counting.
std::map<std::pair<std::size_t, std::size_t>, std::int64_t> lambda_oracle(std::size_t n, std::size_t T,
                                                                          std::size_t a, std::int64_t& odd_v) {
  const auto slots = all_slots(n, T);
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> out;
  odd_v = 0;
  std::vector<std::size_t> pick(a);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t from) {
    if (depth == a) {
      std::vector<int> nodes(n, 0), layers(T, 0);
      for (std::size_t s : pick) {
        nodes[slots[s].i]++;
        nodes[slots[s].j]++;
        layers[slots[s].t]++;
      }
      std::size_t u = 0, v = 0;
      for (int c : nodes) u += c % 2;
      for (int c : layers) v += c % 2;
      REQUIRE(u % 2 == 0);
      if (v % 2) ++odd_v;
      else ++out[{u / 2, v / 2}];
      return;
    }
    for (std::size_t s = from; s < slots.size(); ++s) {
      pick[depth] = s;
      rec(depth + 1, s + 1);
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace

TEST_CASE("chi-square closed form vs brute force for every tau") {
  for (double rho : {0.05, 0.1, 0.2, 0.3, 0.5}) {
    double closed = chi_square_closed_form(4, 2, rho).value;
    for (const auto& tau : enumerate_assignments(2))
      CHECK(rel_close(closed, chi_square_bruteforce(4, 2, rho, tau.bits()), 1e-10));
  }
}

TEST_CASE("chi-square closed form vs pair-overlap oracle beyond brute-force sizes") {
  for (auto [n, T] : {std::pair<std::size_t, std::size_t>{6, 2}, {8, 4}, {10, 6}})
    for (double rho : {0.05, 0.3}) {
      auto tau = enumerate_assignments(T).back();
      CHECK(rel_close(chi_square_closed_form(n, T, rho).value, chi_square_pair_oracle(n, T, rho, tau), 1e-10));
    }
}

TEST_CASE("chi-square brute force accepts unbalanced layer labels") {
  const double rho = 0.3;
  const double two_outcome = (rho / 2) * (rho / 2) / rho + (1 - rho / 2) * (1 - rho / 2) / (1 - rho) - 1;
  CHECK(rel_close(chi_square_bruteforce(2, 1, rho, std::vector<Bit>{0}), two_outcome, 1e-12));
  const double hi = 1.5 * rho;
  const double two_outcome_hi = hi * hi / rho + (1 - hi) * (1 - hi) / (1 - rho) - 1;
  CHECK(rel_close(chi_square_bruteforce(2, 1, rho, std::vector<Bit>{1}), two_outcome_hi, 1e-12));
  CHECK(rel_close(two_outcome, rho / (4 * (1 - rho)), 1e-12));
}

TEST_CASE("chi-square limits, monotonicity and report consistency") {
  CHECK(chi_square_closed_form(4, 2, 1e-8).value < 1e-6);
  CHECK(chi_square_closed_form(4, 2, 1e-8).value >= 0.0);
  CHECK(chi_square_bruteforce(4, 2, 1e-8, std::vector<Bit>{0, 1}) < 1e-6);
  double prev = 0.0;
  for (double rho : {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    auto rep = chi_square_closed_form(4, 2, rho);
    CHECK(rep.value > prev);
    prev = rep.value;
    CHECK(rep.closed_form_used);
    REQUIRE(rep.per_c_terms.size() == 3);
    double s = 0.0;
    for (auto [c, lt] : rep.per_c_terms) s += std::exp(lt);
    CHECK(rel_close(s - 1.0, rep.value, 1e-12));
  }
  CHECK_THROWS_AS(chi_square_closed_form(5, 2, 0.1), ValidationError);
  CHECK_THROWS_AS(chi_square_closed_form(4, 2, 0.7), ValidationError);
  CHECK_THROWS_AS(chi_square_bruteforce(6, 2, 0.1, std::vector<Bit>{0, 1}), SizeGuardError);
}

TEST_CASE("relaxed chi-square form is not an upper bound") {
  bool below = false;
  for (std::size_t T : {2, 8, 32})
    for (double rho : {0.05, 0.2, 0.5})
      if (chi_square_relaxed(4, T, rho) < chi_square_closed_form(4, T, rho).value) below = true;
  CHECK(below);
}

TEST_CASE("E chi_alpha: parity zeros and the two-slot example") {
  const double rho = 0.2, k = kappa(rho);
  CHECK(k == doctest::Approx(0.1 / std::sqrt(0.16)));
  for (const Slot& s : all_slots(4, 2)) {
    std::vector<Slot> one{s};
    CHECK(chi_alpha_expectation(one, 4, 2, rho) == 0.0);
    CHECK(chi_alpha_expectation_bruteforce(one, 4, 2, rho) == 0.0);
  }
  std::vector<Slot> two{{0, 1, 0}, {0, 1, 1}};
  CHECK(chi_alpha_expectation(two, 4, 2, rho) == doctest::Approx(-k * k));
  CHECK(chi_alpha_expectation_bruteforce(two, 4, 2, rho) == doctest::Approx(-k * k));

  std::vector<Slot> bad{{1, 0, 0}};
  CHECK_THROWS_AS(chi_alpha_expectation(bad, 4, 2, rho), ValidationError);
  std::vector<Slot> dup{{0, 1, 0}, {0, 1, 0}};
  CHECK_THROWS_AS(chi_alpha_expectation(dup, 4, 2, rho), ValidationError);
  std::vector<Slot> out{{0, 1, 2}};
  CHECK_THROWS_AS(chi_alpha_expectation(out, 4, 2, rho), ValidationError);
}

TEST_CASE("E chi_alpha closed form equals the (sigma, tau) average for every |alpha| <= 3") {
  const auto slots = all_slots(4, 2);
  const double rho = 0.3;
  std::size_t checked = 0;
  for (std::size_t a = 0; a < slots.size(); ++a) {
    for (std::size_t b = a; b < slots.size(); ++b) {
      for (std::size_t c = b; c < slots.size(); ++c) {
        std::vector<Slot> alpha{slots[a]};
        if (b > a) alpha.push_back(slots[b]);
        if (c > b) alpha.push_back(slots[c]);
        if (b == a && c > b) continue;
        CHECK(chi_alpha_expectation(alpha, 4, 2, rho) ==
              doctest::Approx(chi_alpha_expectation_bruteforce(alpha, 4, 2, rho)).epsilon(1e-12));
        ++checked;
      }
    }
  }
  CHECK(checked == 12 + 66 + 220);
}

TEST_CASE("LDLR: three independent paths agree") {
  for (double rho : {0.1, 0.2, 0.5})
    for (std::size_t D : {1, 2, 3}) {
      auto rep = ldlr_norm_exact(4, 2, rho, D);
      double brute = ldlr_norm_bruteforce(4, 2, rho, D);
      double proj = ldlr_norm_projection(4, 2, rho, D);
      if (D == 1) {
        CHECK(rep.value == 0.0);
        CHECK(brute == 0.0);
        CHECK(proj == 0.0);
      } else {
        CHECK(rel_close(rep.value, brute, 1e-10));
        CHECK(rel_close(rep.value, proj, 1e-10));
      }
      CHECK(rep.per_a_terms.size() == D);
      CHECK(rep.kappa == doctest::Approx(kappa(rho)));
    }
}

TEST_CASE("LDLR is non-decreasing in D and rho") {
  double prev_d = 0.0;
  for (std::size_t D = 1; D <= 4; ++D) {
    double v = ldlr_norm_exact(4, 2, 0.2, D).value;
    CHECK(v >= prev_d);
    prev_d = v;
  }
  double prev_r = 0.0;
  for (double rho : {0.05, 0.1, 0.2, 0.3, 0.5}) {
    double v = ldlr_norm_exact(4, 2, rho, 3).value;
    CHECK(v >= prev_r);
    prev_r = v;
  }
  CHECK(ldlr_norm_exact(8, 4, 0.01, 1).value == 0.0);
  CHECK_THROWS_AS(ldlr_norm_exact(40, 40, 0.1, 9), SizeGuardError);
  CHECK_THROWS_AS(ldlr_norm_projection(4, 4, 0.1, 2), SizeGuardError);
}

TEST_CASE("Lambda census matches an independent count") {
  for (std::size_t a = 1; a <= 3; ++a) {
    std::int64_t odd_v = 0;
    auto oracle = lambda_oracle(4, 2, a, odd_v);
    auto tab = lambda_table(4, 2, a);
    CHECK(tab.odd_v == odd_v);
    CHECK(tab.odd_u == 0);
    std::int64_t sum = 0;
    for (std::size_t r = 0; r < tab.counts.size(); ++r)
      for (std::size_t k = 0; k < tab.counts[r].size(); ++k) {
        auto it = oracle.find({r, k});
        CHECK(tab.at(r, k) == (it == oracle.end() ? 0 : it->second));
        sum += tab.at(r, k);
      }
    CHECK(sum + tab.odd_v == binom_exact(12, a));
    CHECK(tab.total == binom_exact(12, a));
  }
}

TEST_CASE("Lambda examples and partition at n=8, T=4") {
  for (std::size_t r = 0; r <= 2; ++r)
    for (std::size_t k = 0; k <= 1; ++k) CHECK(lambda_count_enumerate(4, 2, 1, r, k).exact == 0);
  CHECK(lambda_count_enumerate(4, 2, 2, 0, 1).exact == 6);
  for (std::size_t a = 1; a <= 3; ++a) {
    auto tab = lambda_table(8, 4, a);
    std::int64_t sum = 0;
    for (const auto& row : tab.counts)
      for (auto c : row) sum += c;
    CHECK(tab.odd_u == 0);
    CHECK(sum + tab.odd_v == binom_exact(112, a));
  }
  CHECK_THROWS_AS(lambda_table(40, 40, 9), SizeGuardError);
}

TEST_CASE("Lambda bound: non-negative, variants ordered, holds at n=8, T=4") {
  for (std::size_t r = 0; r <= 2; ++r)
    for (std::size_t k = 0; k <= 2; ++k) {
      for (std::size_t a = 1; a <= 10; ++a) {
        double b = lambda_count_bound(8, 4, a, r, k);
        CHECK(b >= 0.0);
        CHECK(lambda_count_bound(8, 4, a, r, k, BoundVariant::kManyLayers) <= b);
      }
    }
  for (std::size_t a = 1; a <= 3; ++a) {
    auto tab = lambda_table(8, 4, a);
    for (std::size_t r = 0; r < tab.counts.size(); ++r)
      for (std::size_t k = 0; k < tab.counts[r].size(); ++k)
        CHECK(double(tab.counts[r][k]) <= lambda_count_bound(8, 4, a, r, k));
  }
}

TEST_CASE("xi bound") {
  auto zero = ldlr_upper_bound(4, 2, 0.0, 2);
  CHECK(zero.applicable);
  CHECK(zero.value == 0.0);
  auto b = ldlr_upper_bound(4, 2, 0.01, 2);
  CHECK(b.xi == doctest::Approx(2 * std::pow(2.0, 4.0 / 3.0) * 0.01 * 4 * std::sqrt(2.0)));
  CHECK(b.xi == doctest::Approx(0.2851).epsilon(1e-3));
  CHECK(b.value == doctest::Approx(3.19).epsilon(1e-2));
  CHECK(ldlr_norm_exact(4, 2, 0.01, 2).value <= b.value);
  CHECK_FALSE(ldlr_upper_bound(4, 2, 0.1, 2).applicable);
  CHECK(ldlr_upper_bound(4, 2, 0.01, 2, BoundVariant::kManyLayers).xi < b.xi);
  CHECK_THROWS_AS(ldlr_upper_bound(4, 2, -0.1, 2), ValidationError);
}

TEST_CASE("signed Vandermonde") {
  CHECK(signed_vandermonde(3, 1) == 0);
  CHECK(signed_vandermonde(2, 2) == -2);
  CHECK(signed_vandermonde(6, 4) == 15);
  for (std::int64_t m = 1; m <= 30; ++m)
    for (std::int64_t k = 0; k <= m; ++k) CHECK(signed_vandermonde(m, k) == signed_vandermonde_closed_form(m, k));
  CHECK_THROWS_AS(signed_vandermonde(3, 4), ValidationError);
  CHECK_THROWS_AS(signed_vandermonde(-1, 0), ValidationError);
}

TEST_CASE("hypergeometric tail") {
  for (double t : {0.1, 0.2, 0.3}) {
    auto c = hypergeometric_tail_check(20, 10, 10, t);
    CHECK(c.exact <= c.bound);
    CHECK(c.bound == doctest::Approx(std::exp(-2 * t * t * 10)));
  }
  // exact pmf oracle with integer binomials
  auto pmf = [](std::int64_t x) { return double(binom_exact(10, x) * binom_exact(10, 10 - x)) / double(binom_exact(20, 10)); };
  CHECK(hypergeometric_cdf(20, 10, 10, 5.0) == doctest::Approx(0.5 + pmf(5) / 2).epsilon(1e-12));
  CHECK(hypergeometric_cdf(20, 10, 10, 3.0) == doctest::Approx(pmf(0) + pmf(1) + pmf(2) + pmf(3)).epsilon(1e-12));
  auto edge = hypergeometric_tail_check(20, 10, 10, 0.499);
  CHECK(edge.exact == doctest::Approx(pmf(0)));
  CHECK(edge.exact <= edge.bound);
  CHECK_THROWS_AS(hypergeometric_tail_check(20, 10, 10, 0.0), ValidationError);
  CHECK_THROWS_AS(hypergeometric_tail_check(20, 10, 10, 6.0), ValidationError);
  CHECK_THROWS_AS(hypergeometric_cdf(20, 30, 10, 1.0), ValidationError);
}

TEST_CASE("theory JSON carries the decomposition") {
  auto j = to_json(chi_square_closed_form(4, 2, 0.1));
  CHECK(j["per_c_terms"].size() == 3);
  auto l = to_json(ldlr_norm_exact(4, 2, 0.2, 3));
  CHECK(l["per_a_terms"].size() == 3);
  CHECK(l["degree"] == 3);
  auto x = to_json(ldlr_upper_bound(4, 2, 0.5, 2));
  CHECK(x["applicable"] == false);
  CHECK(x["value"].is_null());
}
