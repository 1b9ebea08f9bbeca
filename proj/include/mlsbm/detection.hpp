#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "json.hpp"
#include "mlsbm/model.hpp"
#include "mlsbm/recovery.hpp"

namespace mlsbm {

struct DetectionDecision {
  Bit decision = 0;  // 1 = planted
  double rho_hat = 0.0;
  double cross_block_mean = 0.0;
  std::size_t shuffle_rounds_used = 0;
};

nlohmann::json to_json(const DetectionDecision& d);

/// Estimates sigma from a stack of layers.
using RecoverFn = std::function<RecoveryResult(const MultiLayerGraph&)>;

/// Wraps a label-free recovery method. mle-local starts from the
/// bias-adjusted estimate; oracle-tau is rejected.
RecoverFn make_recover(RecoveryMethod method);

/// Edge count over C(n, 2).
double estimate_density(std::span<const Edge> layer, std::size_t n);

/// 1 iff |cross_mean - rho_hat| >= 0.3 rho_hat; 0 whenever rho_hat == 0.
Bit detection_rule(double cross_mean, double rho_hat);

/// Layers 0..T-1 feed recover, layer T the cross-block mean, layer T+1 the
/// density estimate.
DetectionDecision split_layer_test(const MultiLayerGraph& graph, const RecoverFn& recover);

inline constexpr std::uint64_t kShuffleStream = 11;

/// Runs split_layer_test on up to `rounds` random layer orders, stopping at
/// the first round that decides 1.
DetectionDecision shuffled_test(const MultiLayerGraph& graph, const RecoverFn& recover, std::size_t rounds, Seed seed);

/// max(1, ceil(log(n^2 rho_hat + 2))) with rho_hat the density of the whole tensor.
std::size_t default_rounds(const MultiLayerGraph& graph);

}  // namespace mlsbm
