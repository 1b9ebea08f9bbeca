#include "mlsbm/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mlsbm/errors.hpp"

namespace mlsbm {

nlohmann::json to_json(const DetectionDecision& d) {
  return {{"decision", d.decision},
          {"rho_hat", d.rho_hat},
          {"cross_block_mean", d.cross_block_mean},
          {"shuffle_rounds_used", d.shuffle_rounds_used}};
}

RecoverFn make_recover(RecoveryMethod method) {
  switch (method) {
    case RecoveryMethod::kBiasAdjusted:
      return [](const MultiLayerGraph& g) { return bias_adjusted_spectral(g); };
    case RecoveryMethod::kAggregateSum:
      return [](const MultiLayerGraph& g) { return aggregate_sum_spectral(g); };
    case RecoveryMethod::kMleExhaustive:
      return [](const MultiLayerGraph& g) { return mle_exhaustive(g); };
    case RecoveryMethod::kMleLocal:
      return [](const MultiLayerGraph& g) { return mle_local_search(g, bias_adjusted_spectral(g).sigma_hat); };
    case RecoveryMethod::kOracleTau:
      break;
  }
  throw ValidationError("oracle-tau needs the true layer labels and cannot drive a detection test");
}

double estimate_density(std::span<const Edge> layer, std::size_t n) {
  if (n < 2) throw ValidationError("n must be at least 2");
  return static_cast<double>(layer.size()) / static_cast<double>(pair_count(n));
}

Bit detection_rule(double cross_mean, double rho_hat) {
  if (!(rho_hat > 0.0)) return 0;
  return std::abs(cross_mean - rho_hat) >= 0.3 * rho_hat ? 1 : 0;
}

DetectionDecision split_layer_test(const MultiLayerGraph& graph, const RecoverFn& recover) {
  if (graph.T() < 3) throw ValidationError("split-layer test needs at least 3 layers");
  const std::size_t n = graph.n();
  if (n % 2 != 0) throw ValidationError("n must be even");
  const std::size_t T = graph.T() - 2;

  DetectionDecision d;
  d.shuffle_rounds_used = 1;
  d.rho_hat = estimate_density(graph.layer(T + 1), n);

  const Assignment sigma_hat = recover(graph.slice(0, T)).sigma_hat;
  std::size_t cross = 0;
  for (const Edge& e : graph.layer(T))
    if (sigma_hat[e.i] != sigma_hat[e.j]) ++cross;
  d.cross_block_mean = 4.0 * static_cast<double>(cross) / (static_cast<double>(n) * static_cast<double>(n));
  d.decision = detection_rule(d.cross_block_mean, d.rho_hat);
  return d;
}

DetectionDecision shuffled_test(const MultiLayerGraph& graph, const RecoverFn& recover, std::size_t rounds, Seed seed) {
  if (rounds < 1) throw ValidationError("rounds must be at least 1");
  if (graph.T() < 3) throw ValidationError("split-layer test needs at least 3 layers");
  DetectionDecision first;
  for (std::size_t round = 0; round < rounds; ++round) {
    std::vector<std::size_t> order(graph.T());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng = make_rng(seed, {kShuffleStream, round});
    std::shuffle(order.begin(), order.end(), rng);
    DetectionDecision d = split_layer_test(graph.permuted(order), recover);
    d.shuffle_rounds_used = round + 1;
    if (round == 0) first = d;
    if (d.decision == 1) return d;
  }
  first.shuffle_rounds_used = rounds;
  return first;
}

std::size_t default_rounds(const MultiLayerGraph& graph) {
  const double slots = static_cast<double>(pair_count(graph.n())) * static_cast<double>(graph.T());
  const double rho_hat = slots > 0 ? static_cast<double>(graph.edge_count()) / slots : 0.0;
  const double n = static_cast<double>(graph.n());
  const double m = std::ceil(std::log(n * n * rho_hat + 2.0));
  return m < 1.0 ? 1 : static_cast<std::size_t>(m);
}

}  // namespace mlsbm
