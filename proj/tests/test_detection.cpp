#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlsbm/detection.hpp"
#include "mlsbm/errors.hpp"
#include "support.hpp"

using namespace mlsbm;

namespace {

// n = 8 layer with 14 of 28 pairs: 8 of the 16 cross pairs and 6 of the 12
// within pairs of sigma = 00001111, i.e. density 1/2 on every block.
std::vector<Edge> half_density_layer() {
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i < 4; ++i)
    for (std::uint32_t j = 4; j < 8; ++j)
      if ((i + j) % 2 == 0) e.push_back({i, j});
  for (auto [i, j] : {std::pair{0u, 1u}, {0u, 2u}, {1u, 3u}, {4u, 5u}, {4u, 6u}, {5u, 7u}}) e.push_back({i, j});
  return e;
}

RecoverFn fixed(const std::string& bits) {
  return [bits](const MultiLayerGraph&) {
    return RecoveryResult{Assignment::from_string(bits), std::nullopt, std::nullopt, "fixed", false};
  };
}

}  // namespace

TEST_CASE("density estimate") {
  CHECK(estimate_density({}, 10) == 0.0);
  std::vector<Edge> k4{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  CHECK(estimate_density(k4, 4) == 1.0);
  std::vector<Edge> nine;
  for (std::uint32_t j = 1; j <= 9; ++j) nine.push_back({0, j});
  CHECK(estimate_density(nine, 10) == doctest::Approx(0.2));
  CHECK_THROWS_AS(estimate_density({}, 1), ValidationError);
}

TEST_CASE("decision rule") {
  const double rho = 0.04;
  CHECK(detection_rule(rho, rho) == 0);
  CHECK(detection_rule(rho / 2, rho) == 1);       // assortative holdout, sigma_hat exact
  CHECK(detection_rule(1.5 * rho, rho) == 1);     // disassortative holdout
  CHECK(detection_rule(0.8 * rho, rho) == 0);
  CHECK(detection_rule(0.55 * rho, rho) == 1);
  CHECK(detection_rule(0.0, 0.0) == 0);
  CHECK(detection_rule(0.3, 0.0) == 0);
}

TEST_CASE("exact-null construction decides 0") {
  auto layer = half_density_layer();
  MultiLayerGraph g(8, {layer, layer, layer, layer});
  auto d = split_layer_test(g, fixed("00001111"));
  CHECK(d.rho_hat == 0.5);
  CHECK(d.cross_block_mean == 0.5);
  CHECK(d.decision == 0);
  for (std::size_t rounds : {1, 3, 6}) CHECK(shuffled_test(g, fixed("00001111"), rounds, 5).decision == 0);
}

TEST_CASE("empty holdout decides 0") {
  auto layer = half_density_layer();
  MultiLayerGraph g(8, {layer, layer, {}, {}});
  auto d = split_layer_test(g, fixed("00001111"));
  CHECK(d.rho_hat == 0.0);
  CHECK(d.decision == 0);
}

TEST_CASE("noiseless planted holdout decides 1") {
  // holdout layer T+1 carries only within-block edges: cross mean 0
  auto sigma = Assignment::from_string("00001111");
  auto parity = testing::parity_fixture(sigma, Assignment::from_string("01"));
  MultiLayerGraph g(8, {parity.layer(0), parity.layer(1), parity.layer(0), half_density_layer()});
  auto d = split_layer_test(g, fixed("00001111"));
  CHECK(d.cross_block_mean == 0.0);
  CHECK(d.decision == 1);
}

TEST_CASE("information separation between the three layer groups") {
  auto inst = sample_planted(MlsbmParams(16, 6, 0.3), 4);
  const auto& g = inst.graph;
  std::size_t seen_layers = 0;
  bool prefix = true;
  RecoverFn spy = [&](const MultiLayerGraph& head) {
    seen_layers = head.T();
    for (std::size_t t = 0; t < head.T(); ++t) prefix = prefix && head.layer(t) == g.layer(t);
    return bias_adjusted_spectral(head);
  };
  auto base = split_layer_test(g, spy);
  CHECK(seen_layers == 4);
  CHECK(prefix);

  auto layers = g.layers();
  layers[4].clear();  // cross-block layer
  auto a = split_layer_test(MultiLayerGraph(16, layers), spy);
  CHECK(a.rho_hat == base.rho_hat);
  layers = g.layers();
  layers[5].clear();  // density layer
  auto b = split_layer_test(MultiLayerGraph(16, layers), spy);
  CHECK(b.cross_block_mean == base.cross_block_mean);

  CHECK_THROWS_AS(split_layer_test(g.slice(0, 2), spy), ValidationError);
}

TEST_CASE("one shuffling round is the split test on the permuted tensor") {
  auto inst = sample_planted(MlsbmParams(32, 8, 0.2), 6);
  auto recover = make_recover(RecoveryMethod::kBiasAdjusted);
  std::vector<std::size_t> order(inst.graph.T());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(77, {kShuffleStream, 0});
  std::shuffle(order.begin(), order.end(), rng);
  auto direct = split_layer_test(inst.graph.permuted(order), recover);
  auto shuffled = shuffled_test(inst.graph, recover, 1, 77);
  CHECK(direct.decision == shuffled.decision);
  CHECK(direct.rho_hat == shuffled.rho_hat);
  CHECK(direct.cross_block_mean == shuffled.cross_block_mean);
  CHECK_THROWS_AS(shuffled_test(inst.graph, recover, 0, 77), ValidationError);
}

TEST_CASE("more rounds never turn a 1 into a 0") {
  auto recover = make_recover(RecoveryMethod::kBiasAdjusted);
  for (Seed s = 0; s < 20; ++s) {
    auto g = s % 2 ? sample_planted(MlsbmParams(40, 8, 0.05), s).graph : sample_null(MlsbmParams(40, 8, 0.05), s);
    Bit prev = 0;
    for (std::size_t rounds = 1; rounds <= 6; ++rounds) {
      Bit d = shuffled_test(g, recover, rounds, 1000 + s).decision;
      CHECK(d >= prev);
      prev = d;
    }
  }
}

TEST_CASE("default rounds") {
  CHECK(default_rounds(MultiLayerGraph::empty(10, 4)) == 1);
  auto g = sample_null(MlsbmParams(20, 4, 0.5), 3);
  double rho_hat = double(g.edge_count()) / (190.0 * 4);
  CHECK(default_rounds(g) == std::size_t(std::ceil(std::log(400 * rho_hat + 2))));
}

TEST_CASE("recover wrappers and JSON") {
  CHECK_THROWS_AS(make_recover(RecoveryMethod::kOracleTau), ValidationError);
  auto g = sample_planted(MlsbmParams(8, 4, 0.4), 2).graph;
  CHECK(make_recover(RecoveryMethod::kMleLocal)(g).objective.has_value());
  CHECK(make_recover(RecoveryMethod::kMleExhaustive)(g).objective.has_value());
  DetectionDecision d{1, 0.25, 0.1, 3};
  auto j = to_json(d);
  CHECK(j["decision"] == 1);
  CHECK(j["rho_hat"] == 0.25);
  CHECK(j["cross_block_mean"] == 0.1);
  CHECK(j["shuffle_rounds_used"] == 3);
}
