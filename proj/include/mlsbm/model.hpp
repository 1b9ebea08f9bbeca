#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mlsbm/rng.hpp"

namespace mlsbm {

using Bit = std::uint8_t;

/// Model knobs (n, T, rho). Both sizes even, 0 < rho < 2/3.
class MlsbmParams {
 public:
  MlsbmParams(std::size_t n, std::size_t T, double rho);

  std::size_t n() const noexcept { return n_; }
  std::size_t T() const noexcept { return T_; }
  double rho() const noexcept { return rho_; }

  /// Connection probability on a parity-even slot, 3*rho/2.
  double p_even() const noexcept { return 1.5 * rho_; }
  /// Connection probability on a parity-odd slot, rho/2.
  double p_odd() const noexcept { return 0.5 * rho_; }

 private:
  std::size_t n_;
  std::size_t T_;
  double rho_;
};

void validate_rho(double rho);

/// A balanced 0/1 labelling: exactly half the entries are 1.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<Bit> labels);

  static Assignment from_string(const std::string& bits);

  std::size_t size() const noexcept { return labels_.size(); }
  Bit operator[](std::size_t i) const { return labels_[i]; }
  std::span<const Bit> bits() const noexcept { return labels_; }

  Assignment flipped() const;
  std::string to_string() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;

 private:
  std::vector<Bit> labels_;
};

/// Undirected edge between 0-based nodes, i < j.
struct Edge {
  std::uint32_t i;
  std::uint32_t j;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// T simple graphs on a shared node set, one sorted edge list per layer.
class MultiLayerGraph {
 public:
  MultiLayerGraph(std::size_t n, std::vector<std::vector<Edge>> layers);

  /// Empty graph with the given shape.
  static MultiLayerGraph empty(std::size_t n, std::size_t T);

  std::size_t n() const noexcept { return n_; }
  std::size_t T() const noexcept { return layers_.size(); }
  const std::vector<Edge>& layer(std::size_t t) const { return layers_.at(t); }
  const std::vector<std::vector<Edge>>& layers() const noexcept { return layers_; }
  std::size_t edge_count() const noexcept;

  /// Graph consisting of layers [first, first + count).
  MultiLayerGraph slice(std::size_t first, std::size_t count) const;
  /// Graph whose layer t is layer order[t] of this one.
  MultiLayerGraph permuted(std::span<const std::size_t> order) const;

  friend bool operator==(const MultiLayerGraph&, const MultiLayerGraph&) = default;

 private:
  std::size_t n_;
  std::vector<std::vector<Edge>> layers_;
};

struct PlantedInstance {
  PlantedInstance(MultiLayerGraph graph, Assignment sigma, Assignment tau);

  MultiLayerGraph graph;
  Assignment sigma;
  Assignment tau;
};

/// Entry (sigma_i, sigma_j) of B^(tau_t): 3rho/2 on parity-even slots,
/// rho/2 on parity-odd ones.
double edge_probability(Bit sigma_i, Bit sigma_j, Bit tau_t, double rho);

/// Uniform balanced labelling of length m.
Assignment random_assignment(std::size_t m, Rng& rng);

/// Draws A given fixed node labels and an arbitrary (not necessarily
/// balanced) per-layer pattern. rho only needs 0 <= rho <= 2/3 here.
MultiLayerGraph sample_given_labels(std::size_t n, double rho, std::span<const Bit> sigma,
                                    std::span<const Bit> tau_bits, Seed seed);

PlantedInstance sample_planted(const MlsbmParams& params, Seed seed);
MultiLayerGraph sample_null(const MlsbmParams& params, Seed seed);

inline constexpr std::size_t kMaxEnumerationLength = 20;

/// All balanced vectors of length m in lexicographic order of their bit strings.
std::vector<Assignment> enumerate_assignments(std::size_t m);

/// Number of unordered node pairs, n(n-1)/2.
constexpr std::uint64_t pair_count(std::uint64_t n) noexcept { return n * (n - 1) / 2; }

}  // namespace mlsbm
