#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "mlsbm/model.hpp"

namespace mlsbm {

/// Contents of an `mlsbm-edges v1` file. Labels are present only for
/// planted instances.
struct GraphFile {
  MultiLayerGraph graph;
  std::optional<Assignment> sigma;
  std::optional<Assignment> tau;
};

// Text format:
//   mlsbm-edges v1 n=<n> T=<T>
//   t i j            (1-based, i < j, sorted by (t, i, j))
//   sigma <bits>     (planted only)
//   tau <bits>       (planted only)
void write_graph(std::ostream& os, const MultiLayerGraph& graph, const Assignment* sigma = nullptr,
                 const Assignment* tau = nullptr);
void write_graph(std::ostream& os, const PlantedInstance& inst);

GraphFile read_graph(std::istream& is);

GraphFile load_graph(const std::filesystem::path& path);
void save_graph(const std::filesystem::path& path, const MultiLayerGraph& graph, const Assignment* sigma = nullptr,
                const Assignment* tau = nullptr);

}  // namespace mlsbm
