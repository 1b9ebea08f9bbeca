#include "mlsbm/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mlsbm/errors.hpp"

namespace mlsbm {

namespace {

constexpr const char* kMagic = "mlsbm-edges";
constexpr const char* kVersion = "v1";

std::size_t parse_field(const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) throw ValidationError("expected '" + prefix + "...' in header, got '" + token + "'");
  try {
    std::size_t pos = 0;
    auto v = std::stoull(token.substr(prefix.size()), &pos);
    if (pos != token.size() - prefix.size()) throw std::invalid_argument(token);
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    throw ValidationError("malformed header field '" + token + "'");
  }
}

}  // namespace

void write_graph(std::ostream& os, const MultiLayerGraph& graph, const Assignment* sigma, const Assignment* tau) {
  os << kMagic << ' ' << kVersion << " n=" << graph.n() << " T=" << graph.T() << '\n';
  for (std::size_t t = 0; t < graph.T(); ++t)
    for (const Edge& e : graph.layer(t)) os << (t + 1) << ' ' << (e.i + 1) << ' ' << (e.j + 1) << '\n';
  if (sigma) os << "sigma " << sigma->to_string() << '\n';
  if (tau) os << "tau " << tau->to_string() << '\n';
}

void write_graph(std::ostream& os, const PlantedInstance& inst) {
  write_graph(os, inst.graph, &inst.sigma, &inst.tau);
}

GraphFile read_graph(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("empty graph file");
  std::istringstream header(line);
  std::string magic, version, n_tok, t_tok, extra;
  header >> magic >> version >> n_tok >> t_tok;
  if (magic != kMagic || version != kVersion) throw ValidationError("not an mlsbm-edges v1 file");
  if (header >> extra) throw ValidationError("trailing tokens in header");
  const std::size_t n = parse_field(n_tok, "n");
  const std::size_t T = parse_field(t_tok, "T");

  std::vector<std::vector<Edge>> layers(T);
  std::optional<Assignment> sigma, tau;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line.rfind("sigma ", 0) == 0 || line.rfind("tau ", 0) == 0) {
      std::string key, bits;
      ls >> key >> bits;
      (key == "sigma" ? sigma : tau) = Assignment::from_string(bits);
      continue;
    }
    if (sigma || tau) throw ValidationError("edge line after label footer at line " + std::to_string(lineno));
    long long t = 0, i = 0, j = 0;
    if (!(ls >> t >> i >> j) || (ls >> extra))
      throw ValidationError("malformed edge line " + std::to_string(lineno) + ": '" + line + "'");
    if (t < 1 || static_cast<std::size_t>(t) > T || i < 1 || j <= i || static_cast<std::size_t>(j) > n)
      throw ValidationError("edge out of range at line " + std::to_string(lineno));
    layers[static_cast<std::size_t>(t - 1)].push_back(
        {static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1)});
  }
  if (sigma && sigma->size() != n) throw ValidationError("sigma footer length does not match n");
  if (tau && tau->size() != T) throw ValidationError("tau footer length does not match T");
  return GraphFile{MultiLayerGraph(n, std::move(layers)), std::move(sigma), std::move(tau)};
}

GraphFile load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file " + path.string());
  return read_graph(in);
}

void save_graph(const std::filesystem::path& path, const MultiLayerGraph& graph, const Assignment* sigma,
                const Assignment* tau) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_graph(out, graph, sigma, tau);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace mlsbm
