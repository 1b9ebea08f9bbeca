#include "mlsbm/theory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <string>

#include <gmpxx.h>

#include "mlsbm/combinatorics.hpp"
#include "mlsbm/errors.hpp"

namespace mlsbm::theory {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_even(std::size_t v, const char* name) {
  if (v < 2 || v % 2 != 0) throw ValidationError(std::string(name) + " must be an even integer >= 2");
}

std::uint64_t to_mask(std::span<const Bit> bits) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) m |= std::uint64_t{1} << i;
  return m;
}

std::vector<std::uint64_t> balanced_masks(std::size_t m) {
  std::vector<std::uint64_t> out;
  for (const auto& a : enumerate_assignments(m)) out.push_back(to_mask(a.bits()));
  return out;
}

// Per-slot node mask (two bits) and layer mask (one bit).
struct SlotMasks {
  std::vector<std::uint64_t> node;
  std::vector<std::uint64_t> layer;
};

SlotMasks slot_masks(const std::vector<Slot>& slots) {
  SlotMasks sm;
  sm.node.reserve(slots.size());
  sm.layer.reserve(slots.size());
  for (const Slot& s : slots) {
    sm.node.push_back((std::uint64_t{1} << s.i) | (std::uint64_t{1} << s.j));
    sm.layer.push_back(std::uint64_t{1} << s.t);
  }
  return sm;
}

// Mask over slot indices of the parity-odd slots under (sigma, tau).
std::uint64_t odd_slot_mask(const std::vector<Slot>& slots, std::uint64_t sigma, std::uint64_t tau) {
  std::uint64_t m = 0;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const Slot& sl = slots[s];
    unsigned p = ((sigma >> sl.i) ^ (sigma >> sl.j) ^ (tau >> sl.t)) & 1U;
    if (p) m |= std::uint64_t{1} << s;
  }
  return m;
}

// Visits every size-a subset of {0..M-1} in colex order.
void for_each_subset(std::size_t M, std::size_t a, const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
  std::vector<std::uint32_t> stack(a);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t limit) {
    if (k == 0) {
      visit(stack);
      return;
    }
    for (std::size_t s = k - 1; s < limit; ++s) {
      stack[k - 1] = static_cast<std::uint32_t>(s);
      rec(k - 1, s);
    }
  };
  if (a <= M) rec(a, M);
}

void guard_subsets(std::size_t n, std::size_t T, std::size_t a, const char* what) {
  if (n > 64 || T > 64) throw SizeGuardError(std::string(what) + ": n and T must be at most 64", double(std::max(n, T)), 64);
  double total = binom(pair_count(n) * T, a);
  if (total > kSubsetEnumerationLimit)
    throw SizeGuardError(std::string(what) + ": C(C(n,2) T, a) exceeds the subset enumeration limit", total,
                         kSubsetEnumerationLimit);
}

mpq_class exact_dyadic(double integral, int exponent) {
  mpq_class q(mpz_class(static_cast<long>(integral)));
  mpz_class p(1);
  if (exponent >= 0) {
    p <<= static_cast<mp_bitcnt_t>(exponent);
    q *= p;
  } else {
    p <<= static_cast<mp_bitcnt_t>(-exponent);
    q /= p;
  }
  return q;
}

double log_weight(std::size_t n, std::size_t T, std::size_t r, std::size_t k) {
  return log_binom(n / 2, r) + log_binom(T / 2, k) - log_binom(n, 2 * r) - log_binom(T, 2 * k);
}

}  // namespace

// ---------------------------------------------------------------------------

ChiSquareReport chi_square_closed_form(std::size_t n, std::size_t T, double rho) {
  MlsbmParams params(n, T, rho);
  // a = (1 - 3rho/4)/(1 - rho), b = (1 - 5rho/4)/(1 - rho)
  const double la = std::log1p(-0.75 * rho) - std::log1p(-rho);
  const double lb = std::log1p(-1.25 * rho) - std::log1p(-rho);
  const double h = static_cast<double>(n / 2);
  const double Td = static_cast<double>(T);
  const double lnorm = log_binom(n, n / 2);

  ChiSquareReport rep;
  std::vector<double> logs;
  for (std::size_t c = 0; c <= n / 2; ++c) {
    double cd = static_cast<double>(c);
    double e_a = 2.0 * Td * (cd * cd + (h - cd) * (h - cd) - static_cast<double>(n) / 4.0);
    double e_b = 4.0 * Td * cd * (h - cd);
    double lt = 2.0 * log_binom(n / 2, c) - lnorm + e_a * la + e_b * lb;
    rep.per_c_terms.emplace_back(c, lt);
    logs.push_back(lt);
  }
  rep.value = std::expm1(log_sum_exp(logs));
  if (rep.value < 0.0 && rep.value > -1e-15) rep.value = 0.0;
  rep.closed_form_used = true;
  return rep;
}

double chi_square_relaxed(std::size_t n, std::size_t T, double rho) {
  MlsbmParams params(n, T, rho);
  const double la = std::log1p(-0.75 * rho) - std::log1p(-rho);
  const double lb = std::log1p(-1.25 * rho) - std::log1p(-rho);
  const double half_slots = static_cast<double>(pair_count(n)) * static_cast<double>(T) / 2.0;
  const double quarter = static_cast<double>(n) / 4.0;
  std::vector<double> logs;
  for (std::size_t c = 0; c <= n / 2; ++c) {
    double d = static_cast<double>(c) - quarter;
    logs.push_back(2.0 * log_binom(n / 2, c) + 2.0 * static_cast<double>(T) * d * d * (la - lb));
  }
  return std::expm1(half_slots * (la + lb) - log_binom(n, n / 2) + log_sum_exp(logs));
}

double chi_square_bruteforce(std::size_t n, std::size_t T, double rho, std::span<const Bit> tau) {
  require_even(n, "n");
  if (T < 1) throw ValidationError("T must be at least 1");
  validate_rho(rho);
  if (tau.size() != T) throw ValidationError("tau length must equal T");
  for (Bit b : tau)
    if (b > 1) throw ValidationError("tau entries must be 0 or 1");
  const std::size_t M = pair_count(n) * T;
  if (M > kMaxBruteForceSlots)
    throw SizeGuardError("chi-square brute force: C(n,2) T exceeds the tensor enumeration limit", double(M),
                         double(kMaxBruteForceSlots));

  const std::vector<Slot> slots = all_slots(n, T);
  const std::uint64_t tau_mask = to_mask(tau);
  std::vector<std::uint64_t> even_masks;
  std::vector<std::size_t> even_sizes;
  const std::uint64_t full = (M == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << M) - 1);
  for (std::uint64_t s : balanced_masks(n)) {
    std::uint64_t even = full & ~odd_slot_mask(slots, s, tau_mask);
    even_masks.push_back(even);
    even_sizes.push_back(static_cast<std::size_t>(std::popcount(even)));
  }

  using LD = long double;
  const LD r = rho, hi = 1.5L * r, lo = 0.5L * r;
  auto pow_table = [M](LD base) {
    std::vector<LD> t(M + 1, 1.0L);
    for (std::size_t i = 1; i <= M; ++i) t[i] = t[i - 1] * base;
    return t;
  };
  const auto hi1 = pow_table(hi), hi0 = pow_table(1 - hi), lo1 = pow_table(lo), lo0 = pow_table(1 - lo);
  const auto r1 = pow_table(r), r0 = pow_table(1 - r);
  const LD inv_count = 1.0L / static_cast<LD>(even_masks.size());

  LD total = 0.0L;
  for (std::uint64_t A = 0; A <= full; ++A) {
    std::size_t edges = static_cast<std::size_t>(std::popcount(A));
    LD p1 = 0.0L;
    for (std::size_t q = 0; q < even_masks.size(); ++q) {
      std::size_t ee = static_cast<std::size_t>(std::popcount(A & even_masks[q]));
      std::size_t eo = edges - ee;
      std::size_t ne = even_sizes[q], no = M - ne;
      p1 += hi1[ee] * hi0[ne - ee] * lo1[eo] * lo0[no - eo];
    }
    p1 *= inv_count;
    LD p0 = r1[edges] * r0[M - edges];
    LD d = p1 - p0;
    total += d * d / p0;
    if (A == full) break;
  }
  return static_cast<double>(total);
}

// ---------------------------------------------------------------------------

std::vector<Slot> all_slots(std::size_t n, std::size_t T) {
  std::vector<Slot> out;
  out.reserve(pair_count(n) * T);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(t)});
  return out;
}

double kappa(double rho) {
  if (!(rho > 0.0) || !(rho < 1.0)) throw ValidationError("rho must lie in (0, 1)");
  return (rho / 2.0) / std::sqrt(rho * (1.0 - rho));
}

namespace {

void validate_alpha(std::span<const Slot> alpha, std::size_t n, std::size_t T) {
  std::set<Slot> seen;
  for (const Slot& s : alpha) {
    if (!(s.i < s.j) || s.j >= n || s.t >= T) throw ValidationError("malformed slot set: slot outside the tensor");
    if (!seen.insert(s).second) throw ValidationError("malformed slot set: repeated slot");
  }
}

}  // namespace

double chi_alpha_expectation(std::span<const Slot> alpha, std::size_t n, std::size_t T, double rho) {
  require_even(n, "n");
  require_even(T, "T");
  validate_rho(rho);
  validate_alpha(alpha, n, T);
  std::vector<std::uint8_t> node_par(n, 0), layer_par(T, 0);
  for (const Slot& s : alpha) {
    node_par[s.i] ^= 1;
    node_par[s.j] ^= 1;
    layer_par[s.t] ^= 1;
  }
  std::size_t u = 0, v = 0;
  for (auto p : node_par) u += p;
  for (auto p : layer_par) v += p;
  if (u % 2 != 0 || v % 2 != 0) return 0.0;
  double magnitude = std::pow(kappa(rho), static_cast<double>(alpha.size())) *
                     std::exp(log_binom(n / 2, u / 2) + log_binom(T / 2, v / 2) - log_binom(n, u) - log_binom(T, v));
  return ((u / 2 + v / 2) % 2 == 0) ? magnitude : -magnitude;
}

double chi_alpha_expectation_bruteforce(std::span<const Slot> alpha, std::size_t n, std::size_t T, double rho) {
  require_even(n, "n");
  require_even(T, "T");
  validate_rho(rho);
  validate_alpha(alpha, n, T);
  const auto sigmas = enumerate_assignments(n);
  const auto taus = enumerate_assignments(T);
  const double k = kappa(rho);
  double sum = 0.0;
  for (const auto& s : sigmas)
    for (const auto& t : taus) {
      double prod = 1.0;
      for (const Slot& sl : alpha) prod *= ((s[sl.i] + s[sl.j] + t[sl.t]) % 2 == 0) ? k : -k;
      sum += prod;
    }
  return sum / static_cast<double>(sigmas.size() * taus.size());
}

// ---------------------------------------------------------------------------

std::int64_t LambdaTable::at(std::size_t r, std::size_t k) const {
  if (r >= counts.size() || k >= counts[r].size()) return 0;
  return counts[r][k];
}

LambdaTable lambda_table(std::size_t n, std::size_t T, std::size_t a) {
  require_even(n, "n");
  require_even(T, "T");
  if (a < 1) throw ValidationError("a must be at least 1");
  guard_subsets(n, T, a, "lambda enumeration");
  const auto slots = all_slots(n, T);
  const SlotMasks sm = slot_masks(slots);

  LambdaTable tab;
  tab.n = n;
  tab.T = T;
  tab.a = a;
  tab.counts.assign(n / 2 + 1, std::vector<std::int64_t>(T / 2 + 1, 0));
  for_each_subset(slots.size(), a, [&](const std::vector<std::uint32_t>& idx) {
    std::uint64_t u = 0, v = 0;
    for (std::uint32_t s : idx) {
      u ^= sm.node[s];
      v ^= sm.layer[s];
    }
    int cu = std::popcount(u), cv = std::popcount(v);
    ++tab.total;
    if (cu % 2 != 0) {
      ++tab.odd_u;
    } else if (cv % 2 != 0) {
      ++tab.odd_v;
    } else {
      ++tab.counts[static_cast<std::size_t>(cu / 2)][static_cast<std::size_t>(cv / 2)];
    }
  });
  return tab;
}

LambdaCount lambda_count_enumerate(std::size_t n, std::size_t T, std::size_t a, std::size_t r, std::size_t k) {
  LambdaTable tab = lambda_table(n, T, a);
  return {n, T, a, r, k, tab.at(r, k), lambda_count_bound(n, T, a, r, k)};
}

double log_lambda_count_bound(std::size_t n, std::size_t T, std::size_t a, std::size_t r, std::size_t k,
                              BoundVariant variant) {
  if (a < 1) throw ValidationError("a must be at least 1");
  const double ad = static_cast<double>(a);
  const double power = (variant == BoundVariant::kGeneral) ? 4.0 * ad / 3.0 : ad;
  return (1.0 + 2.5 * ad) * std::log(2.0) + power * std::log(ad) + log_binom(n, 2 * r) + log_binom(T, 2 * k) +
         (ad - static_cast<double>(r)) * std::log(static_cast<double>(n)) +
         (ad / 2.0 - static_cast<double>(k)) * std::log(static_cast<double>(T));
}

double lambda_count_bound(std::size_t n, std::size_t T, std::size_t a, std::size_t r, std::size_t k,
                          BoundVariant variant) {
  return std::exp(log_lambda_count_bound(n, T, a, r, k, variant));
}

// ---------------------------------------------------------------------------

LdlrReport ldlr_norm_exact(std::size_t n, std::size_t T, double rho, std::size_t D) {
  MlsbmParams params(n, T, rho);
  if (D < 1) throw ValidationError("D must be at least 1");
  guard_subsets(n, T, D, "LDLR enumeration");
  LdlrReport rep;
  rep.degree = D;
  rep.kappa = kappa(rho);
  const double log_k2 = 2.0 * std::log(rep.kappa);
  long double total = 0.0L;
  for (std::size_t a = 1; a <= D; ++a) {
    LambdaTable tab = lambda_table(n, T, a);
    std::vector<double> logs;
    for (std::size_t r = 0; r < tab.counts.size(); ++r)
      for (std::size_t k = 0; k < tab.counts[r].size(); ++k) {
        if (tab.counts[r][k] == 0) continue;
        logs.push_back(static_cast<double>(a) * log_k2 + std::log(static_cast<double>(tab.counts[r][k])) +
                       2.0 * log_weight(n, T, r, k));
      }
    double term = logs.empty() ? 0.0 : std::exp(log_sum_exp(logs));
    rep.per_a_terms.push_back(term);
    total += term;
  }
  rep.value = static_cast<double>(total);
  return rep;
}

double ldlr_norm_bruteforce(std::size_t n, std::size_t T, double rho, std::size_t D) {
  MlsbmParams params(n, T, rho);
  if (D < 1) throw ValidationError("D must be at least 1");
  guard_subsets(n, T, D, "LDLR brute force");
  const auto slots = all_slots(n, T);
  if (slots.size() > 64) throw SizeGuardError("LDLR brute force: more than 64 slots", double(slots.size()), 64);
  std::vector<std::uint64_t> odd;
  for (std::uint64_t s : balanced_masks(n))
    for (std::uint64_t t : balanced_masks(T)) odd.push_back(odd_slot_mask(slots, s, t));
  const double k = kappa(rho);
  long double total = 0.0L;
  for (std::size_t a = 1; a <= D; ++a) {
    const double ka = std::pow(k, static_cast<double>(a));
    for_each_subset(slots.size(), a, [&](const std::vector<std::uint32_t>& idx) {
      std::uint64_t am = 0;
      for (std::uint32_t s : idx) am |= std::uint64_t{1} << s;
      long long signed_count = 0;
      for (std::uint64_t o : odd) signed_count += (std::popcount(am & o) % 2 == 0) ? 1 : -1;
      double e = ka * static_cast<double>(signed_count) / static_cast<double>(odd.size());
      total += static_cast<long double>(e) * e;
    });
  }
  return static_cast<double>(total);
}

double ldlr_norm_projection(std::size_t n, std::size_t T, double rho, std::size_t D) {
  MlsbmParams params(n, T, rho);
  if (D < 1) throw ValidationError("D must be at least 1");
  const std::size_t M = pair_count(n) * T;
  if (M > kMaxProjectionSlots)
    throw SizeGuardError("likelihood projection: C(n,2) T exceeds the tensor enumeration limit", double(M),
                         double(kMaxProjectionSlots));
  const auto slots = all_slots(n, T);
  const std::uint64_t count = std::uint64_t{1} << M;

  // rho is a double, hence a dyadic rational; everything below is exact.
  int exp2 = 0;
  const double mant = std::frexp(rho, &exp2);
  const mpq_class r = exact_dyadic(std::ldexp(mant, 53), exp2 - 53);
  const mpq_class one(1), hi = r * 3 / 2, lo = r / 2;

  std::vector<std::uint64_t> odd;
  for (std::uint64_t s : balanced_masks(n))
    for (std::uint64_t t : balanced_masks(T)) odd.push_back(odd_slot_mask(slots, s, t));

  auto pow_table = [M](const mpq_class& base) {
    std::vector<mpq_class> t(M + 1, mpq_class(1));
    for (std::size_t i = 1; i <= M; ++i) t[i] = t[i - 1] * base;
    return t;
  };
  const auto hi1 = pow_table(hi), hi0 = pow_table(one - hi), lo1 = pow_table(lo), lo0 = pow_table(one - lo);
  const auto r1 = pow_table(r), r0 = pow_table(one - r);

  // E_{P0}[L chi_alpha] only needs P0(A) L(A) per tensor. Times the number of
  // label pairs it is dyadic, so it is stored as an integer over 2^shift.
  std::vector<mpq_class> weight(count);
  std::size_t shift = 0;
  for (std::uint64_t A = 0; A < count; ++A) {
    const std::size_t edges = static_cast<std::size_t>(std::popcount(A));
    mpq_class p1(0);
    for (std::uint64_t o : odd) {
      const std::uint64_t even = ~o & (count - 1);
      const std::size_t ne = static_cast<std::size_t>(std::popcount(even)), no = M - ne;
      const std::size_t ee = static_cast<std::size_t>(std::popcount(A & even)), eo = edges - ee;
      p1 += hi1[ee] * hi0[ne - ee] * lo1[eo] * lo0[no - eo];
    }
    p1 /= static_cast<unsigned long>(odd.size());
    const mpq_class p0 = r1[edges] * r0[M - edges];
    const mpq_class lr = p1 / p0;
    weight[A] = p0 * lr * static_cast<unsigned long>(odd.size());
    const mpz_class& den = weight[A].get_den();
    const std::size_t bits = mpz_sizeinbase(den.get_mpz_t(), 2) - 1;
    if (mpz_scan1(den.get_mpz_t(), 0) != bits) throw std::logic_error("likelihood projection: non-dyadic weight");
    shift = std::max(shift, bits);
  }
  std::vector<mpz_class> scaled(count);
  for (std::uint64_t A = 0; A < count; ++A) {
    const mpz_class& den = weight[A].get_den();
    const std::size_t bits = mpz_sizeinbase(den.get_mpz_t(), 2) - 1;
    scaled[A] = weight[A].get_num();
    scaled[A] <<= static_cast<mp_bitcnt_t>(shift - bits);
  }
  mpz_class scale(1);
  scale <<= static_cast<mp_bitcnt_t>(shift);
  scale *= static_cast<unsigned long>(odd.size());

  // chi_alpha(A) = prod (A_s - rho) / (rho (1 - rho))^{a/2}, so the squared
  // coefficient is rational.
  const mpq_class var = r * (one - r);
  const auto pos = pow_table(one - r), neg = pow_table(-r);
  mpq_class total(0);
  for (std::size_t a = 1; a <= D && a <= M; ++a) {
    mpq_class var_a(1);
    for (std::size_t i = 0; i < a; ++i) var_a *= var;
    std::vector<mpz_class> bucket(a + 1);
    for_each_subset(M, a, [&](const std::vector<std::uint32_t>& idx) {
      std::uint64_t am = 0;
      for (std::uint32_t s : idx) am |= std::uint64_t{1} << s;
      for (auto& b : bucket) b = 0;
      for (std::uint64_t A = 0; A < count; ++A) bucket[static_cast<std::size_t>(std::popcount(A & am))] += scaled[A];
      mpq_class c(0);
      for (std::size_t h = 0; h <= a; ++h) c += mpq_class(bucket[h]) * pos[h] * neg[a - h];
      c /= scale;
      total += c * c / var_a;
    });
  }
  return total.get_d();
}

// ---------------------------------------------------------------------------

XiBound ldlr_upper_bound(double n, double T, double rho, double D, BoundVariant variant) {
  if (!(n > 0) || !(T > 0) || !(D > 0)) throw ValidationError("n, T and D must be positive");
  if (!(rho >= 0.0) || !(rho < 2.0 / 3.0)) throw ValidationError("rho must lie in [0, 2/3)");
  XiBound b;
  const double dpow = (variant == BoundVariant::kGeneral) ? std::pow(D, 4.0 / 3.0) : D;
  b.xi = 2.0 * dpow * rho * n * std::sqrt(T);
  b.applicable = b.xi < 1.0;
  b.value = b.applicable ? 8.0 * b.xi / (1.0 - b.xi) : std::numeric_limits<double>::infinity();
  return b;
}

// ---------------------------------------------------------------------------

std::int64_t signed_vandermonde(std::int64_t m, std::int64_t k) {
  if (m < 0 || k < 0 || k > m) throw ValidationError("signed Vandermonde requires 0 <= k <= m");
  std::int64_t sum = 0;
  for (std::int64_t i = 0; i <= k; ++i) {
    std::int64_t term = binom_exact(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(i)) *
                        binom_exact(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k - i));
    sum += (i % 2 == 0) ? term : -term;
  }
  return sum;
}

std::int64_t signed_vandermonde_closed_form(std::int64_t m, std::int64_t k) {
  if (m < 0 || k < 0 || k > m) throw ValidationError("signed Vandermonde requires 0 <= k <= m");
  if (k % 2 != 0) return 0;
  std::int64_t c = binom_exact(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k / 2));
  return ((k / 2) % 2 == 0) ? c : -c;
}

double hypergeometric_cdf(std::int64_t N, std::int64_t K, std::int64_t m, double x) {
  if (N < 1 || K < 0 || K > N || m < 0 || m > N) throw ValidationError("hypergeometric requires 0 <= K, m <= N");
  const std::int64_t lo = std::max<std::int64_t>(0, m - (N - K));
  const std::int64_t hi = std::min(K, m);
  const auto top = static_cast<std::int64_t>(std::floor(x + 1e-9));
  const double lnorm = log_binom(static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(m));
  double sum = 0.0;
  for (std::int64_t j = lo; j <= std::min(hi, top); ++j)
    sum += std::exp(log_binom(static_cast<std::uint64_t>(K), static_cast<std::uint64_t>(j)) +
                    log_binom(static_cast<std::uint64_t>(N - K), static_cast<std::uint64_t>(m - j)) - lnorm);
  return std::min(sum, 1.0);
}

TailCheck hypergeometric_tail_check(std::int64_t N, std::int64_t K, std::int64_t m, double t) {
  if (N < 1 || K < 0 || K > N || m < 1 || m > N) throw ValidationError("hypergeometric requires 0 <= K <= N, 1 <= m <= N");
  const double p = static_cast<double>(K) / static_cast<double>(N);
  if (!(t > 0.0) || !(t < p * static_cast<double>(m)))
    throw ValidationError("tail check requires 0 < t < mK/N");
  TailCheck out;
  out.exact = hypergeometric_cdf(N, K, m, (p - t) * static_cast<double>(m));
  out.bound = std::exp(-2.0 * t * t * static_cast<double>(m));
  return out;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const ChiSquareReport& r) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [c, lt] : r.per_c_terms) terms.push_back({{"c", c}, {"log_term", lt}});
  return {{"value", r.value}, {"per_c_terms", terms}, {"closed_form_used", r.closed_form_used}};
}

nlohmann::json to_json(const LdlrReport& r) {
  return {{"degree", r.degree}, {"value", r.value}, {"per_a_terms", r.per_a_terms}, {"kappa", r.kappa}};
}

nlohmann::json to_json(const LambdaCount& c) {
  return {{"n", c.n}, {"T", c.T}, {"a", c.a}, {"r", c.r}, {"k", c.k}, {"exact", c.exact}, {"upper_bound", c.upper_bound}};
}

nlohmann::json to_json(const XiBound& b) {
  nlohmann::json j = {{"xi", b.xi}, {"applicable", b.applicable}};
  j["value"] = b.applicable ? nlohmann::json(b.value) : nlohmann::json(nullptr);
  return j;
}

}  // namespace mlsbm::theory
