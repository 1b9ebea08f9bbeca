#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mlsbm/model.hpp"

namespace testing {

using mlsbm::Assignment;
using mlsbm::Bit;
using mlsbm::Edge;
using mlsbm::MultiLayerGraph;

// Every parity-even slot present, every odd slot absent.
inline MultiLayerGraph parity_fixture(const Assignment& sigma, const Assignment& tau) {
  const std::size_t n = sigma.size();
  std::vector<std::vector<Edge>> layers(tau.size());
  for (std::size_t t = 0; t < tau.size(); ++t)
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j)
        if ((sigma[i] + sigma[j] + tau[t]) % 2 == 0) layers[t].push_back({i, j});
  return MultiLayerGraph(n, std::move(layers));
}

inline MultiLayerGraph complete_tensor(std::size_t n, std::size_t T) {
  std::vector<std::vector<Edge>> layers(T);
  for (auto& layer : layers)
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) layer.push_back({i, j});
  return MultiLayerGraph(n, std::move(layers));
}

// The n=4, T=2 tensor with sigma=0011, tau=01 and exactly its 6 even slots.
inline MultiLayerGraph six_edge_fixture() {
  return parity_fixture(Assignment::from_string("0011"), Assignment::from_string("01"));
}

inline bool rel_close(double a, double b, double rel) {
  if (a == b) return true;
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace testing
