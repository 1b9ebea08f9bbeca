#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mlsbm/cli.hpp"
#include "mlsbm/graph_io.hpp"
#include "mlsbm/metrics.hpp"
#include "mlsbm/experiments.hpp"
#include "mlsbm/recovery.hpp"
#include "support.hpp"

using namespace mlsbm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("mlsbm_cli_" + name);
  fs::remove(p);
  fs::remove(p.string() + ".json");
  return p;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"generate", "--n", "8"}).code == 2);
  CHECK(invoke({"generate", "--n", "7", "--T", "2", "--rho", "0.1"}).code == 2);
  CHECK(invoke({"generate", "--n", "8", "--T", "2", "--rho", "0.9"}).code == 2);
  CHECK(invoke({"generate", "--n", "8", "--T", "2", "--rho", "abc"}).code == 2);
  CHECK(invoke({"recover", "--n", "8", "--T", "2", "--rho", "0.1", "--method", "nope"}).code == 2);
  CHECK(invoke({"recover"}).code == 2);
  CHECK(invoke({"detect", "--n", "8", "--T", "2", "--rho", "0.1", "--rounds", "0"}).code == 2);
  CHECK(invoke({"detect", "--n", "8", "--T", "2", "--rho", "0.1", "--recover", "oracle-tau"}).code == 2);
  CHECK(invoke({"theory", "lambda", "--variant", "odd"}).code == 2);
  auto e = invoke({"generate", "--n", "7", "--T", "2", "--rho", "0.1"});
  CHECK(e.err.find("error:") == 0);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("generate writes a parseable planted tensor") {
  auto g = invoke({"generate", "--n", "10", "--T", "4", "--rho", "0.3", "--seed", "5", "--planted"});
  REQUIRE(g.code == 0);
  std::istringstream is(g.out);
  auto gf = read_graph(is);
  REQUIRE(gf.sigma);
  REQUIRE(gf.tau);
  auto inst = sample_planted(MlsbmParams(10, 4, 0.3), 5);
  CHECK(gf.graph == inst.graph);
  CHECK(*gf.sigma == inst.sigma);
  CHECK(invoke({"generate", "--n", "10", "--T", "4", "--rho", "0.3", "--seed", "5", "--planted"}).out == g.out);

  auto null = invoke({"generate", "--n", "10", "--T", "4", "--rho", "0.3", "--seed", "5"});
  std::istringstream ns(null.out);
  CHECK_FALSE(read_graph(ns).sigma);
}

TEST_CASE("recover from file and inline") {
  auto path = scratch("g.txt");
  REQUIRE(invoke({"generate", "--n", "8", "--T", "4", "--rho", "0.4", "--seed", "3", "--planted", "--out",
                  path.string()})
              .code == 0);
  for (const char* m : {"bias-adjusted", "aggregate-sum", "oracle-tau", "mle-exhaustive", "mle-local"}) {
    auto r = invoke({"recover", "--input", path.string(), "--method", m});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["method"] == m);
    CHECK(j.contains("loss_vs_truth"));
  }
  auto inl = invoke({"recover", "--n", "8", "--T", "4", "--rho", "0.4", "--seed", "3", "--method", "mle-exhaustive"});
  CHECK(inl.out == invoke({"recover", "--input", path.string(), "--method", "mle-exhaustive"}).out);

  auto exact = nlohmann::json::parse(inl.out);
  auto inst = sample_planted(MlsbmParams(8, 4, 0.4), 3);
  CHECK(exact["objective"] == mle_exhaustive(inst.graph).objective.value());

  auto null_path = scratch("null.txt");
  invoke({"generate", "--n", "8", "--T", "4", "--rho", "0.4", "--out", null_path.string()});
  CHECK(invoke({"recover", "--input", null_path.string(), "--method", "oracle-tau"}).code == 2);
  CHECK(invoke({"recover", "--input", "/nonexistent/g.txt"}).code == 1);
  CHECK(invoke({"recover", "--n", "40", "--T", "40", "--rho", "0.1", "--method", "mle-exhaustive"}).code == 3);
  fs::remove(path);
  fs::remove(null_path);
}

TEST_CASE("detect emits a decision record") {
  auto d = invoke({"detect", "--n", "16", "--T", "8", "--rho", "0.3", "--seed", "4", "--planted"});
  REQUIRE(d.code == 0);
  auto j = nlohmann::json::parse(d.out);
  CHECK(j["layers"] == 10);
  CHECK((j["decision"] == 0 || j["decision"] == 1));
  CHECK(j["planted"] == true);
  auto again = invoke({"detect", "--n", "16", "--T", "8", "--rho", "0.3", "--seed", "4", "--planted", "--rounds",
                       "auto", "--shuffle-seed", "9"});
  CHECK(again.code == 0);
}

TEST_CASE("theory subcommands") {
  auto c = invoke({"theory", "chi2", "--n", "4", "--T", "2", "--rho", "0.1"});
  CHECK(c.code == 0);
  CHECK(c.out.find("PASS") != std::string::npos);
  auto cj = nlohmann::json::parse(invoke({"theory", "chi2", "--json"}).out);
  CHECK(cj["agree"] == true);
  CHECK(cj["bruteforce"].size() == 2);
  auto big = invoke({"theory", "chi2", "--n", "8", "--T", "4", "--rho", "0.1"});
  CHECK(big.code == 0);
  CHECK(big.out.find("SKIP") != std::string::npos);

  auto l = nlohmann::json::parse(invoke({"theory", "ldlr", "--rho", "0.2", "--D", "3", "--json"}).out);
  CHECK(l["agree"] == true);
  CHECK(l["projection"].is_number());

  auto lam = invoke({"theory", "lambda", "--n", "4", "--T", "2", "--a", "2", "--json"});
  CHECK(lam.code == 0);
  CHECK(nlohmann::json::parse(lam.out)["partition_ok"] == true);
  auto guard = invoke({"theory", "lambda", "--n", "40", "--T", "40", "--a", "9"});
  CHECK(guard.code == 3);
  CHECK(guard.err.find("1e+07") != std::string::npos);

  auto b = nlohmann::json::parse(invoke({"theory", "bounds", "--rho", "0.01", "--json"}).out);
  CHECK(b["dominates"] == true);
  auto probe = nlohmann::json::parse(invoke({"theory", "bounds", "--n", "1000", "--T", "100", "--probe", "--json"}).out);
  CHECK(probe.size() == 8);

  auto lem = invoke({"theory", "lemmas"});
  CHECK(lem.code == 0);
  CHECK(lem.out.find("495 cases, 0 mismatches") != std::string::npos);
}

TEST_CASE("sweep and gap-demo") {
  auto cfg = scratch("cfg.json");
  auto out = scratch("out.csv");
  {
    std::ofstream f(cfg);
    f << R"({"cells":[[8,4,0.3]],"methods":["bias-adjusted","mle-local"],"trials":2,"base_seed":1})";
  }
  auto s = invoke({"sweep", "--config", cfg.string(), "--out", out.string()});
  REQUIRE(s.code == 0);
  CHECK(fs::exists(out));
  CHECK(invoke({"sweep", "--config", cfg.string(), "--out", out.string()}).code == 1);
  CHECK(invoke({"sweep", "--config", cfg.string(), "--out", out.string(), "--overwrite"}).code == 0);
  CHECK(invoke({"sweep", "--config", cfg.string()}).code == 2);
  CHECK(invoke({"sweep", "--config", "/nonexistent/c.json", "--out", out.string()}).code == 1);
  {
    std::ofstream f(cfg);
    f << "{not json";
  }
  CHECK(invoke({"sweep", "--config", cfg.string(), "--out", out.string(), "--overwrite"}).code == 2);

  auto g = invoke({"gap-demo", "--n", "8", "--T", "4", "--rho", "0.3", "--trials", "2"});
  REQUIRE(g.code == 0);
  auto j = nlohmann::json::parse(g.out);
  CHECK(j["trials"] == 2);
  CHECK(j["between_thresholds"] == false);
  fs::remove(cfg);
  fs::remove(out);
  fs::remove(out.string() + ".json");
}

TEST_CASE("documented command examples") {
  auto a = invoke({"generate", "--n", "4", "--T", "2", "--rho", "0.5", "--seed", "7", "--planted"});
  CHECK(a.code == 0);
  CHECK(a.out == invoke({"generate", "--n", "4", "--T", "2", "--rho", "0.5", "--seed", "7", "--planted"}).out);
  auto odd = invoke({"generate", "--n", "5", "--T", "2", "--rho", "0.5"});
  CHECK(odd.code == 2);
  CHECK(odd.err.find("even") != std::string::npos);
  CHECK(invoke({"generate", "--n", "4", "--T", "2", "--rho", "5e-3"}).code == 0);

  auto six = scratch("six.txt");
  auto sigma = Assignment::from_string("0011");
  auto tau = Assignment::from_string("01");
  save_graph(six, testing::six_edge_fixture(), &sigma, &tau);
  auto r = nlohmann::json::parse(invoke({"recover", "--input", six.string(), "--method", "mle-exhaustive"}).out);
  CHECK(r["loss_vs_truth"] == 0.0);
  CHECK(r["objective"] == 6);

  // complete tensor: cross-block mean equals the holdout density
  auto full = scratch("full.txt");
  save_graph(full, testing::complete_tensor(8, 4));
  auto d = nlohmann::json::parse(invoke({"detect", "--input", full.string()}).out);
  CHECK(d["decision"] == 0);

  auto l = nlohmann::json::parse(invoke({"theory", "ldlr", "--n", "4", "--T", "2", "--rho", "0.2", "--D", "1",
                                         "--json"}).out);
  CHECK(l["exact"]["value"] == 0.0);
  CHECK(l["bruteforce"] == 0.0);
  CHECK(l["projection"] == 0.0);

  auto cfg = scratch("one.json");
  auto out = scratch("one.csv");
  std::ofstream(cfg) << R"({"cells":[[8,4,0.2]],"trials":7})";
  REQUIRE(invoke({"sweep", "--config", cfg.string(), "--out", out.string()}).code == 0);
  CHECK(read_results(out).size() == 7);
  CHECK(invoke({"generate", "--n", "4", "--T", "2", "--rho", "0.5", "--bogus"}).code == 2);
  auto help = invoke({"detect", "--help"});
  for (const char* flag : {"--input", "--n", "--T", "--rho", "--seed", "--planted", "--recover", "--rounds",
                           "--shuffle-seed", "--out"})
    CHECK(help.out.find(flag) != std::string::npos);
  for (const auto& p : {six, full, cfg, out}) fs::remove(p);
  fs::remove(out.string() + ".json");
}
