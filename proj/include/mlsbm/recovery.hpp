#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mlsbm/model.hpp"
#include "mlsbm/spectral.hpp"

namespace mlsbm {

enum class RecoveryMethod { kBiasAdjusted, kAggregateSum, kOracleTau, kMleExhaustive, kMleLocal };

std::string method_name(RecoveryMethod m);
RecoveryMethod parse_method(const std::string& name);

struct RecoveryResult {
  Assignment sigma_hat;
  std::optional<Assignment> tau_hat;
  /// Blockwise parity-even edge count at (sigma_hat, tau_hat); MLE variants only.
  std::optional<std::int64_t> objective;
  std::string method;
  bool degenerate = false;
};

/// {method, sigma_hat, tau_hat?, objective?, loss_vs_truth?, degenerate_flag}
nlohmann::json to_json(const RecoveryResult& r, const Assignment* truth = nullptr);

/// Number of edges (i<j, t) with sigma_i + sigma_j + tau_t even.
std::int64_t mle_objective(const MultiLayerGraph& graph, const Assignment& sigma, const Assignment& tau);

inline constexpr double kMleCandidateLimit = 1e7;

/// Exact maximizer by enumeration; first optimum in (sigma, tau) enumeration
/// order wins, reported sigma_hat starts with 0.
RecoveryResult mle_exhaustive(const MultiLayerGraph& graph);

struct LocalSearchTrace {
  std::vector<std::int64_t> objective;  // after every half-step
  std::size_t rounds = 0;
};

inline constexpr std::size_t kDefaultLocalSearchRounds = 50;

/// Alternating ascent: best balanced layer labels given sigma, then
/// best-improvement node swaps given tau, until nothing changes.
RecoveryResult mle_local_search(const MultiLayerGraph& graph, const Assignment& init,
                                std::size_t max_rounds = kDefaultLocalSearchRounds, LocalSearchTrace* trace = nullptr);

/// Sum_t (A_t^2 - D_t): two-hop counts with the degree diagonal removed.
DenseSymMatrix bias_adjusted_matrix(const MultiLayerGraph& graph);
/// Sum_t A_t.
DenseSymMatrix sum_matrix(const MultiLayerGraph& graph);
/// Sum_t (-1)^{tau_t} A_t.
DenseSymMatrix signed_sum_matrix(const MultiLayerGraph& graph, std::span<const Bit> tau);

inline constexpr std::size_t kMaxDenseNodes = 4096;

enum class VectorChoice {
  kLeading,      // eigenvector of the largest |eigenvalue|
  kSmallerMean,  // of the top two, the one closer to orthogonal to the all-ones vector
};

/// Balanced rounding of the chosen top-2 eigenvector. Zero matrices and a
/// repeated top |eigenvalue| yield the flagged fallback assignment.
RecoveryResult cluster_matrix(const DenseSymMatrix& m, VectorChoice choice, const std::string& method);

RecoveryResult bias_adjusted_spectral(const MultiLayerGraph& graph);
RecoveryResult aggregate_sum_spectral(const MultiLayerGraph& graph);
RecoveryResult oracle_tau_spectral(const MultiLayerGraph& graph, const Assignment& tau);

/// 1 on the n/2 largest scores; equal scores favour the lower index.
Assignment balanced_rounding(std::span<const double> scores);

}  // namespace mlsbm
