#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mlsbm/model.hpp"

namespace mlsbm::theory {

// ---------------------------------------------------------------------------
// Chi-square divergence between the planted model (layer labels fixed) and
// the null model.
// ---------------------------------------------------------------------------

struct ChiSquareReport {
  double value = 0.0;
  /// (c, log of the c-th summand of sum_A P1^2/P0); c = shared ones of two node labellings.
  std::vector<std::pair<std::size_t, double>> per_c_terms;
  bool closed_form_used = true;
};

/// Exact sum over the overlap c of two balanced node labellings; independent of tau.
ChiSquareReport chi_square_closed_form(std::size_t n, std::size_t T, double rho);

/// The relaxed variant with exponent 2T(c - n/4)^2. Diagnostic only: it is not
/// an upper bound on the exact value once (c - n/4)^2 > n/8.
double chi_square_relaxed(std::size_t n, std::size_t T, double rho);

inline constexpr std::size_t kMaxBruteForceSlots = 24;

/// Sum over all 2^{C(n,2) T} tensors. tau may be any 0/1 pattern.
double chi_square_bruteforce(std::size_t n, std::size_t T, double rho, std::span<const Bit> tau);

// ---------------------------------------------------------------------------
// Low-degree likelihood ratio.
// ---------------------------------------------------------------------------

/// One coordinate (i < j, t) of the adjacency tensor, 0-based.
struct Slot {
  std::uint32_t i;
  std::uint32_t j;
  std::uint32_t t;
  friend auto operator<=>(const Slot&, const Slot&) = default;
};

/// All slots, layer-major, pairs in lexicographic order within a layer.
std::vector<Slot> all_slots(std::size_t n, std::size_t T);

/// (rho/2) / sqrt(rho (1 - rho)).
double kappa(double rho);

/// E_{P1} chi_alpha from the parity sets U_alpha (odd node counts) and
/// V_alpha (odd layer counts).
double chi_alpha_expectation(std::span<const Slot> alpha, std::size_t n, std::size_t T, double rho);

/// Same quantity by averaging the conditional expectation over every
/// (sigma, tau) pair.
double chi_alpha_expectation_bruteforce(std::span<const Slot> alpha, std::size_t n, std::size_t T, double rho);

struct LdlrReport {
  std::size_t degree = 0;
  double value = 0.0;
  /// per_a_terms[a - 1] = contribution of |alpha| = a.
  std::vector<double> per_a_terms;
  double kappa = 0.0;
};

inline constexpr double kSubsetEnumerationLimit = 1e7;

/// ||L^{<=D} - 1||^2 through exact Lambda_{n,a,r,k} cardinalities.
LdlrReport ldlr_norm_exact(std::size_t n, std::size_t T, double rho, std::size_t D);

/// Sum of squared E_{P1} chi_alpha over 1 <= |alpha| <= D, each computed
/// by the (sigma, tau) average.
double ldlr_norm_bruteforce(std::size_t n, std::size_t T, double rho, std::size_t D);

inline constexpr std::size_t kMaxProjectionSlots = 16;

/// Builds L = P1/P0 on every tensor and projects it onto the chi_alpha basis.
double ldlr_norm_projection(std::size_t n, std::size_t T, double rho, std::size_t D);

// ---------------------------------------------------------------------------
// Lambda_{n,a,r,k} = {alpha : |alpha| = a, |U_alpha| = 2r, |V_alpha| = 2k}.
// ---------------------------------------------------------------------------

enum class BoundVariant {
  kGeneral,     // a^{4a/3}
  kManyLayers,  // a^a, valid when T grows faster than D^2
};

struct LambdaCount {
  std::size_t n, T, a, r, k;
  std::int64_t exact;
  double upper_bound;
};

/// Full census of the size-a subsets of slots.
struct LambdaTable {
  std::size_t n = 0, T = 0, a = 0;
  /// counts[r][k]
  std::vector<std::vector<std::int64_t>> counts;
  std::int64_t odd_u = 0;  // always 0: each slot adds two node appearances
  std::int64_t odd_v = 0;
  std::int64_t total = 0;  // C(C(n,2) T, a)
  std::int64_t at(std::size_t r, std::size_t k) const;
};

LambdaTable lambda_table(std::size_t n, std::size_t T, std::size_t a);
LambdaCount lambda_count_enumerate(std::size_t n, std::size_t T, std::size_t a, std::size_t r, std::size_t k);

double log_lambda_count_bound(std::size_t n, std::size_t T, std::size_t a, std::size_t r, std::size_t k,
                              BoundVariant variant = BoundVariant::kGeneral);
double lambda_count_bound(std::size_t n, std::size_t T, std::size_t a, std::size_t r, std::size_t k,
                          BoundVariant variant = BoundVariant::kGeneral);

struct XiBound {
  double xi = 0.0;
  bool applicable = false;  // geometric series only sums when xi < 1
  double value = 0.0;       // 8 xi / (1 - xi) when applicable
};

/// xi = 2 D^{4/3} rho n sqrt(T) (D^{1} for the many-layers variant).
XiBound ldlr_upper_bound(double n, double T, double rho, double D, BoundVariant variant = BoundVariant::kGeneral);

// ---------------------------------------------------------------------------
// Auxiliary identities.
// ---------------------------------------------------------------------------

/// sum_{i=0}^{k} (-1)^i C(m,i) C(m,k-i), by direct summation.
std::int64_t signed_vandermonde(std::int64_t m, std::int64_t k);
/// 0 for odd k, (-1)^{k/2} C(m, k/2) for even k.
std::int64_t signed_vandermonde_closed_form(std::int64_t m, std::int64_t k);

/// P(X <= x) for X ~ Hypergeometric(N, K, m) by direct summation.
double hypergeometric_cdf(std::int64_t N, std::int64_t K, std::int64_t m, double x);

struct TailCheck {
  double exact = 0.0;  // P(X <= (K/N - t) m)
  double bound = 0.0;  // exp(-2 t^2 m)
};

TailCheck hypergeometric_tail_check(std::int64_t N, std::int64_t K, std::int64_t m, double t);

nlohmann::json to_json(const ChiSquareReport& r);
nlohmann::json to_json(const LdlrReport& r);
nlohmann::json to_json(const LambdaCount& c);
nlohmann::json to_json(const XiBound& b);

}  // namespace mlsbm::theory
