#include "mlsbm/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlsbm/combinatorics.hpp"
#include "mlsbm/errors.hpp"
#include "mlsbm/metrics.hpp"

namespace mlsbm {

namespace {

constexpr double kRepeatedEigenTolerance = 1e-10;

void require_dims(const MultiLayerGraph& g, const Assignment& sigma, const Assignment& tau) {
  if (sigma.size() != g.n()) throw ValidationError("sigma length " + std::to_string(sigma.size()) + " != n");
  if (tau.size() != g.T()) throw ValidationError("tau length " + std::to_string(tau.size()) + " != T");
}

// Edges per layer whose endpoints share a label.
std::vector<std::int64_t> within_counts(const MultiLayerGraph& g, std::span<const Bit> sigma) {
  std::vector<std::int64_t> w(g.T(), 0);
  for (std::size_t t = 0; t < g.T(); ++t)
    for (const Edge& e : g.layer(t)) w[t] += sigma[e.i] == sigma[e.j];
  return w;
}

Assignment canonical(const Assignment& a) { return a.size() > 0 && a[0] == 1 ? a.flipped() : a; }

// Balanced layer labels maximizing the objective for fixed node labels:
// tau_t = 0 on the T/2 layers with the largest within-minus-cross margin.
Assignment best_layer_labels(const MultiLayerGraph& g, std::span<const Bit> sigma) {
  const auto w = within_counts(g, sigma);
  std::vector<std::int64_t> margin(g.T());
  for (std::size_t t = 0; t < g.T(); ++t) margin[t] = 2 * w[t] - static_cast<std::int64_t>(g.layer(t).size());
  std::vector<std::size_t> order(g.T());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return margin[a] > margin[b]; });
  std::vector<Bit> tau(g.T(), 1);
  for (std::size_t r = 0; r < g.T() / 2; ++r) tau[order[r]] = 0;
  return Assignment(std::move(tau));
}

RecoveryResult fallback(std::size_t n, const std::string& method) {
  std::vector<double> zeros(n, 0.0);
  return RecoveryResult{balanced_rounding(zeros), std::nullopt, std::nullopt, method, true};
}

}  // namespace

RecoveryResult cluster_matrix(const DenseSymMatrix& m, VectorChoice choice, const std::string& method) {
  const std::size_t n = m.size();
  if (m.is_zero()) return fallback(n, method);
  const EigenPairs pairs = top_eigenpairs(m, 2);
  const double top = std::abs(pairs.values[0]);
  if (top - std::abs(pairs.values[1]) <= kRepeatedEigenTolerance * top) return fallback(n, method);

  std::size_t pick = 0;
  if (choice == VectorChoice::kSmallerMean) {
    auto abs_mean = [](const std::vector<double>& v) {
      return std::abs(std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()));
    };
    pick = abs_mean(pairs.vectors[1]) < abs_mean(pairs.vectors[0]) ? 1 : 0;
  }
  return RecoveryResult{balanced_rounding(pairs.vectors[pick]), std::nullopt, std::nullopt, method, false};
}

namespace {

void require_dense_size(const MultiLayerGraph& g) {
  if (g.n() > kMaxDenseNodes)
    throw SizeGuardError("dense aggregate matrix too large", static_cast<double>(g.n()),
                         static_cast<double>(kMaxDenseNodes));
}

}  // namespace

std::string method_name(RecoveryMethod m) {
  switch (m) {
    case RecoveryMethod::kBiasAdjusted: return "bias-adjusted";
    case RecoveryMethod::kAggregateSum: return "aggregate-sum";
    case RecoveryMethod::kOracleTau: return "oracle-tau";
    case RecoveryMethod::kMleExhaustive: return "mle-exhaustive";
    case RecoveryMethod::kMleLocal: return "mle-local";
  }
  return "unknown";
}

RecoveryMethod parse_method(const std::string& name) {
  for (auto m : {RecoveryMethod::kBiasAdjusted, RecoveryMethod::kAggregateSum, RecoveryMethod::kOracleTau,
                 RecoveryMethod::kMleExhaustive, RecoveryMethod::kMleLocal})
    if (method_name(m) == name) return m;
  throw ValidationError("unknown recovery method '" + name + "'");
}

nlohmann::json to_json(const RecoveryResult& r, const Assignment* truth) {
  nlohmann::json j;
  j["method"] = r.method;
  j["sigma_hat"] = r.sigma_hat.to_string();
  if (r.tau_hat) j["tau_hat"] = r.tau_hat->to_string();
  if (r.objective) j["objective"] = *r.objective;
  if (truth) j["loss_vs_truth"] = hamming_loss(r.sigma_hat, *truth).value;
  j["degenerate_flag"] = r.degenerate;
  return j;
}

std::int64_t mle_objective(const MultiLayerGraph& graph, const Assignment& sigma, const Assignment& tau) {
  require_dims(graph, sigma, tau);
  std::int64_t total = 0;
  for (std::size_t t = 0; t < graph.T(); ++t)
    for (const Edge& e : graph.layer(t)) total += ((sigma[e.i] + sigma[e.j] + tau[t]) & 1) == 0;
  return total;
}

RecoveryResult mle_exhaustive(const MultiLayerGraph& graph) {
  const std::size_t n = graph.n(), T = graph.T();
  if (n < 2 || n % 2 || T < 2 || T % 2) throw ValidationError("mle_exhaustive needs even n and T");
  const double candidates = std::exp(log_binom(n, n / 2) + log_binom(T, T / 2));
  if (candidates > kMleCandidateLimit * (1 + 1e-9))
    throw SizeGuardError("mle_exhaustive candidate count exceeds guard", candidates, kMleCandidateLimit);

  const auto sigmas = enumerate_assignments(n);
  const auto taus = enumerate_assignments(T);
  std::vector<std::int64_t> edges(T);
  for (std::size_t t = 0; t < T; ++t) edges[t] = static_cast<std::int64_t>(graph.layer(t).size());

  std::int64_t best = -1;
  std::size_t best_s = 0, best_t = 0;
  for (std::size_t s = 0; s < sigmas.size(); ++s) {
    const auto w = within_counts(graph, sigmas[s].bits());
    for (std::size_t k = 0; k < taus.size(); ++k) {
      std::int64_t obj = 0;
      for (std::size_t t = 0; t < T; ++t) obj += taus[k][t] == 0 ? w[t] : edges[t] - w[t];
      if (obj > best) {
        best = obj;
        best_s = s;
        best_t = k;
      }
    }
  }
  return RecoveryResult{canonical(sigmas[best_s]), taus[best_t], best, method_name(RecoveryMethod::kMleExhaustive),
                        false};
}

RecoveryResult mle_local_search(const MultiLayerGraph& graph, const Assignment& init, std::size_t max_rounds,
                                LocalSearchTrace* trace) {
  const std::size_t n = graph.n(), T = graph.T();
  if (init.size() != n) throw ValidationError("local search init length != n");
  if (T < 2 || T % 2) throw ValidationError("local search needs an even number of layers");

  std::vector<Bit> sigma(init.bits().begin(), init.bits().end());
  std::optional<Assignment> tau;
  std::vector<std::int64_t> w(n * n);
  std::vector<std::int64_t> g0(n), g1(n);
  if (trace) *trace = {};

  auto record = [&] {
    if (trace) trace->objective.push_back(mle_objective(graph, Assignment(sigma), *tau));
  };

  for (std::size_t round = 1; round <= max_rounds; ++round) {
    bool changed = false;
    Assignment next_tau = best_layer_labels(graph, sigma);
    if (!tau || next_tau != *tau) {
      changed = true;
      tau = std::move(next_tau);
    }
    record();

    // Signed pair weights: +1 per edge on an assortative layer, -1 otherwise.
    std::fill(w.begin(), w.end(), 0);
    for (std::size_t t = 0; t < T; ++t) {
      const std::int64_t sgn = (*tau)[t] == 0 ? 1 : -1;
      for (const Edge& e : graph.layer(t)) {
        w[e.i * n + e.j] += sgn;
        w[e.j * n + e.i] += sgn;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      g0[i] = g1[i] = 0;
      for (std::size_t k = 0; k < n; ++k) (sigma[k] == 0 ? g0[i] : g1[i]) += w[i * n + k];
    }
    for (;;) {
      std::int64_t best_gain = 0;
      std::size_t bi = n, bj = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (sigma[i] != 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (sigma[j] != 1) continue;
          const std::int64_t gain = g1[i] - g0[i] + g0[j] - g1[j] - 2 * w[i * n + j];
          if (gain > best_gain) {
            best_gain = gain;
            bi = i;
            bj = j;
          }
        }
      }
      if (bi == n) break;
      sigma[bi] = 1;
      sigma[bj] = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const std::int64_t d = w[k * n + bj] - w[k * n + bi];
        g0[k] += d;
        g1[k] -= d;
      }
      changed = true;
    }
    record();
    if (trace) trace->rounds = round;
    if (!changed) break;
  }

  Assignment sigma_hat(std::move(sigma));
  const auto obj = mle_objective(graph, sigma_hat, *tau);
  return RecoveryResult{std::move(sigma_hat), std::move(tau), obj, method_name(RecoveryMethod::kMleLocal), false};
}

DenseSymMatrix bias_adjusted_matrix(const MultiLayerGraph& graph) {
  require_dense_size(graph);
  const std::size_t n = graph.n();
  DenseSymMatrix m(n);
  std::vector<std::vector<std::uint32_t>> adj(n);
  std::vector<std::uint32_t> touched;
  for (const auto& layer : graph.layers()) {
    for (const Edge& e : layer) {
      if (adj[e.i].empty()) touched.push_back(e.i);
      if (adj[e.j].empty()) touched.push_back(e.j);
      adj[e.i].push_back(e.j);
      adj[e.j].push_back(e.i);
    }
    // (A^2)_ab = number of common neighbours; the diagonal equals the degree
    // and is dropped.
    for (std::uint32_t k : touched) {
      const auto& nb = adj[k];
      for (std::size_t x = 0; x < nb.size(); ++x)
        for (std::size_t y = x + 1; y < nb.size(); ++y) m.add_symmetric(nb[x], nb[y], 1.0);
    }
    for (std::uint32_t k : touched) adj[k].clear();
    touched.clear();
  }
  return m;
}

DenseSymMatrix sum_matrix(const MultiLayerGraph& graph) {
  require_dense_size(graph);
  DenseSymMatrix m(graph.n());
  for (const auto& layer : graph.layers())
    for (const Edge& e : layer) m.add_symmetric(e.i, e.j, 1.0);
  return m;
}

DenseSymMatrix signed_sum_matrix(const MultiLayerGraph& graph, std::span<const Bit> tau) {
  require_dense_size(graph);
  if (tau.size() != graph.T()) throw ValidationError("tau length != T");
  DenseSymMatrix m(graph.n());
  for (std::size_t t = 0; t < graph.T(); ++t) {
    const double sgn = tau[t] == 0 ? 1.0 : -1.0;
    for (const Edge& e : graph.layer(t)) m.add_symmetric(e.i, e.j, sgn);
  }
  return m;
}

RecoveryResult bias_adjusted_spectral(const MultiLayerGraph& graph) {
  if (graph.n() < 4) throw ValidationError("bias_adjusted_spectral needs n >= 4");
  return cluster_matrix(bias_adjusted_matrix(graph), VectorChoice::kSmallerMean,
                        method_name(RecoveryMethod::kBiasAdjusted));
}

RecoveryResult aggregate_sum_spectral(const MultiLayerGraph& graph) {
  if (graph.n() < 4) throw ValidationError("aggregate_sum_spectral needs n >= 4");
  return cluster_matrix(sum_matrix(graph), VectorChoice::kSmallerMean, method_name(RecoveryMethod::kAggregateSum));
}

RecoveryResult oracle_tau_spectral(const MultiLayerGraph& graph, const Assignment& tau) {
  if (graph.n() < 4) throw ValidationError("oracle_tau_spectral needs n >= 4");
  return cluster_matrix(signed_sum_matrix(graph, tau.bits()), VectorChoice::kLeading,
                        method_name(RecoveryMethod::kOracleTau));
}

Assignment balanced_rounding(std::span<const double> scores) {
  const std::size_t n = scores.size();
  if (n < 2 || n % 2) throw ValidationError("balanced_rounding needs an even, non-empty score vector");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<Bit> labels(n, 0);
  for (std::size_t r = 0; r < n / 2; ++r) labels[order[r]] = 1;
  return Assignment(std::move(labels));
}

}  // namespace mlsbm
