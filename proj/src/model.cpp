#include "mlsbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "mlsbm/errors.hpp"

namespace mlsbm {

namespace {

enum Stream : std::uint64_t { kSigmaStream = 1, kTauStream = 2, kGraphStream = 3, kLayerStream = 4 };

// Below this node count, layers are sampled slot by slot.
constexpr std::size_t kSparseSamplingMinNodes = 64;

void check_bits(std::span<const Bit> bits, const char* what) {
  for (Bit b : bits)
    if (b > 1) throw ValidationError(std::string(what) + " must contain only 0/1 entries");
}

// Colex decode of a pair index into (a, b), a < b.
std::pair<std::uint64_t, std::uint64_t> decode_pair(std::uint64_t idx) {
  auto b = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(idx))) / 2.0);
  while (b * (b - 1) / 2 > idx) --b;
  while ((b + 1) * b / 2 <= idx) ++b;
  return {idx - b * (b - 1) / 2, b};
}

// k distinct values from [0, range), Floyd's algorithm.
std::vector<std::uint64_t> sample_distinct(std::uint64_t range, std::uint64_t k, Rng& rng) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k) * 2);
  for (std::uint64_t j = range - k; j < range; ++j) {
    std::uniform_int_distribution<std::uint64_t> pick(0, j);
    std::uint64_t v = pick(rng);
    if (!chosen.insert(v).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t draw_binomial(std::uint64_t trials, double p, Rng& rng) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::uint64_t> dist(trials, p);
  return dist(rng);
}

void add_within(const std::vector<std::uint32_t>& members, double p, Rng& rng, std::vector<Edge>& out) {
  const std::uint64_t slots = pair_count(members.size());
  if (members.size() < 2) return;
  const auto k = draw_binomial(slots, p, rng);
  for (std::uint64_t idx : sample_distinct(slots, k, rng)) {
    auto [a, b] = decode_pair(idx);
    std::uint32_t u = members[a], v = members[b];
    out.push_back(u < v ? Edge{u, v} : Edge{v, u});
  }
}

void add_cross(const std::vector<std::uint32_t>& left, const std::vector<std::uint32_t>& right, double p,
               Rng& rng, std::vector<Edge>& out) {
  const std::uint64_t slots = static_cast<std::uint64_t>(left.size()) * right.size();
  if (slots == 0) return;
  const auto k = draw_binomial(slots, p, rng);
  for (std::uint64_t idx : sample_distinct(slots, k, rng)) {
    std::uint32_t u = left[idx / right.size()], v = right[idx % right.size()];
    out.push_back(u < v ? Edge{u, v} : Edge{v, u});
  }
}

std::vector<Edge> sample_layer_dense(std::size_t n, std::span<const Bit> sigma, Bit tau_t, double rho, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const bool even = ((sigma[i] + sigma[j] + tau_t) & 1) == 0;
      const double p = even ? 1.5 * rho : 0.5 * rho;
      if (unif(rng) < p) edges.push_back({i, j});
    }
  return edges;
}

}  // namespace

void validate_rho(double rho) {
  if (!(rho > 0.0 && rho < 2.0 / 3.0))
    throw ValidationError("rho must lie in (0, 2/3), got " + std::to_string(rho));
}

MlsbmParams::MlsbmParams(std::size_t n, std::size_t T, double rho) : n_(n), T_(T), rho_(rho) {
  if (n < 2 || n % 2 != 0) throw ValidationError("n must be an even integer >= 2, got " + std::to_string(n));
  if (T < 2 || T % 2 != 0) throw ValidationError("T must be an even integer >= 2, got " + std::to_string(T));
  validate_rho(rho);
}

Assignment::Assignment(std::vector<Bit> labels) : labels_(std::move(labels)) {
  check_bits(labels_, "assignment");
  const auto ones = std::count(labels_.begin(), labels_.end(), Bit{1});
  if (labels_.size() % 2 != 0 || static_cast<std::size_t>(ones) * 2 != labels_.size())
    throw ValidationError("assignment of length " + std::to_string(labels_.size()) + " is not balanced (" +
                          std::to_string(ones) + " ones)");
}

Assignment Assignment::from_string(const std::string& bits) {
  std::vector<Bit> labels;
  labels.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw ValidationError("bad bit character '" + std::string(1, c) + "'");
    labels.push_back(static_cast<Bit>(c - '0'));
  }
  return Assignment(std::move(labels));
}

Assignment Assignment::flipped() const {
  std::vector<Bit> out(labels_.size());
  std::transform(labels_.begin(), labels_.end(), out.begin(), [](Bit b) { return static_cast<Bit>(1 - b); });
  return Assignment(std::move(out));
}

std::string Assignment::to_string() const {
  std::string s(labels_.size(), '0');
  for (std::size_t i = 0; i < labels_.size(); ++i) s[i] = static_cast<char>('0' + labels_[i]);
  return s;
}

MultiLayerGraph::MultiLayerGraph(std::size_t n, std::vector<std::vector<Edge>> layers)
    : n_(n), layers_(std::move(layers)) {
  for (std::size_t t = 0; t < layers_.size(); ++t) {
    auto& layer = layers_[t];
    for (const Edge& e : layer)
      if (e.i >= e.j || e.j >= n_)
        throw ValidationError("invalid edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) + ") in layer " +
                              std::to_string(t));
    std::sort(layer.begin(), layer.end());
    if (std::adjacent_find(layer.begin(), layer.end()) != layer.end())
      throw ValidationError("duplicate edge in layer " + std::to_string(t));
  }
}

MultiLayerGraph MultiLayerGraph::empty(std::size_t n, std::size_t T) {
  return MultiLayerGraph(n, std::vector<std::vector<Edge>>(T));
}

std::size_t MultiLayerGraph::edge_count() const noexcept {
  std::size_t total = 0;
  for (const auto& l : layers_) total += l.size();
  return total;
}

MultiLayerGraph MultiLayerGraph::slice(std::size_t first, std::size_t count) const {
  if (first + count > layers_.size()) throw ValidationError("layer slice out of range");
  return MultiLayerGraph(n_, std::vector<std::vector<Edge>>(layers_.begin() + static_cast<std::ptrdiff_t>(first),
                                                            layers_.begin() + static_cast<std::ptrdiff_t>(first + count)));
}

MultiLayerGraph MultiLayerGraph::permuted(std::span<const std::size_t> order) const {
  if (order.size() != layers_.size()) throw ValidationError("layer permutation has wrong length");
  std::vector<std::vector<Edge>> out;
  out.reserve(order.size());
  for (std::size_t src : order) out.push_back(layers_.at(src));
  return MultiLayerGraph(n_, std::move(out));
}

PlantedInstance::PlantedInstance(MultiLayerGraph g, Assignment s, Assignment t)
    : graph(std::move(g)), sigma(std::move(s)), tau(std::move(t)) {
  if (sigma.size() != graph.n() || tau.size() != graph.T())
    throw ValidationError("planted labels do not match graph dimensions");
}

double edge_probability(Bit sigma_i, Bit sigma_j, Bit tau_t, double rho) {
  validate_rho(rho);
  if (sigma_i > 1 || sigma_j > 1 || tau_t > 1) throw ValidationError("labels must be bits");
  return ((sigma_i + sigma_j + tau_t) & 1) == 0 ? 1.5 * rho : 0.5 * rho;
}

Assignment random_assignment(std::size_t m, Rng& rng) {
  if (m % 2 != 0) throw ValidationError("balanced assignment needs even length");
  std::vector<Bit> labels(m, 0);
  std::fill(labels.begin() + static_cast<std::ptrdiff_t>(m / 2), labels.end(), Bit{1});
  std::shuffle(labels.begin(), labels.end(), rng);
  return Assignment(std::move(labels));
}

MultiLayerGraph sample_given_labels(std::size_t n, double rho, std::span<const Bit> sigma,
                                    std::span<const Bit> tau_bits, Seed seed) {
  if (sigma.size() != n) throw ValidationError("sigma length does not match n");
  if (!(rho >= 0.0 && rho <= 2.0 / 3.0)) throw ValidationError("rho must lie in [0, 2/3]");
  check_bits(sigma, "sigma");
  check_bits(tau_bits, "tau");

  std::vector<std::uint32_t> block[2];
  for (std::uint32_t i = 0; i < n; ++i) block[sigma[i]].push_back(i);

  std::vector<std::vector<Edge>> layers(tau_bits.size());
  for (std::size_t t = 0; t < tau_bits.size(); ++t) {
    Rng rng = make_rng(seed, {kLayerStream, t});
    if (n < kSparseSamplingMinNodes) {
      layers[t] = sample_layer_dense(n, sigma, tau_bits[t], rho, rng);
      continue;
    }
    const double p_within = tau_bits[t] == 0 ? 1.5 * rho : 0.5 * rho;
    const double p_cross = tau_bits[t] == 0 ? 0.5 * rho : 1.5 * rho;
    auto& edges = layers[t];
    add_within(block[0], p_within, rng, edges);
    add_within(block[1], p_within, rng, edges);
    add_cross(block[0], block[1], p_cross, rng, edges);
  }
  return MultiLayerGraph(n, std::move(layers));
}

PlantedInstance sample_planted(const MlsbmParams& params, Seed seed) {
  Rng sigma_rng = make_rng(seed, {kSigmaStream});
  Rng tau_rng = make_rng(seed, {kTauStream});
  Assignment sigma = random_assignment(params.n(), sigma_rng);
  Assignment tau = random_assignment(params.T(), tau_rng);
  auto graph = sample_given_labels(params.n(), params.rho(), sigma.bits(), tau.bits(),
                                   derive_seed(seed, {kGraphStream}));
  return PlantedInstance(std::move(graph), std::move(sigma), std::move(tau));
}

MultiLayerGraph sample_null(const MlsbmParams& params, Seed seed) {
  const std::size_t n = params.n();
  const double rho = params.rho();
  const Seed graph_seed = derive_seed(seed, {kGraphStream});
  std::vector<std::vector<Edge>> layers(params.T());
  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);
  for (std::size_t t = 0; t < params.T(); ++t) {
    Rng rng = make_rng(graph_seed, {kLayerStream, t});
    if (n < kSparseSamplingMinNodes) {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
          if (unif(rng) < rho) layers[t].push_back({i, j});
    } else {
      add_within(all, rho, rng, layers[t]);
    }
  }
  return MultiLayerGraph(n, std::move(layers));
}

std::vector<Assignment> enumerate_assignments(std::size_t m) {
  if (m < 2 || m % 2 != 0) throw ValidationError("enumerate_assignments needs an even m >= 2, got " + std::to_string(m));
  if (m > kMaxEnumerationLength)
    throw SizeGuardError("enumerate_assignments length too large", static_cast<double>(m),
                         static_cast<double>(kMaxEnumerationLength));
  std::vector<Bit> v(m, 0);
  std::fill(v.begin() + static_cast<std::ptrdiff_t>(m / 2), v.end(), Bit{1});
  std::vector<Assignment> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

}  // namespace mlsbm
