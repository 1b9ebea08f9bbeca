#include "mlsbm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "mlsbm/combinatorics.hpp"
#include "mlsbm/detection.hpp"
#include "mlsbm/errors.hpp"
#include "mlsbm/metrics.hpp"
#include "mlsbm/recovery.hpp"

namespace mlsbm {

namespace {

constexpr std::uint64_t kTrialStream = 21;
constexpr std::uint64_t kNullStream = 22;
constexpr std::uint64_t kShuffleSeedStream = 23;

const char* kind_name(ExperimentConfig::Kind k) {
  return k == ExperimentConfig::Kind::kPhase ? "phase" : "detection";
}

// Runs fn(0..count-1) on a pool; results land in caller-owned slots so the
// output order never depends on scheduling.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<Cell> exponent_grid(const std::vector<std::size_t>& ns, const std::vector<double>& as,
                                const std::vector<double>& bs) {
  std::vector<Cell> cells;
  for (std::size_t n : ns)
    for (double a : as)
      for (double b : bs) {
        double t = std::pow(static_cast<double>(n), a);
        auto T = static_cast<std::size_t>(std::llround(t / 2.0)) * 2;
        cells.push_back({n, std::max<std::size_t>(T, 2), std::pow(static_cast<double>(n), -b)});
      }
  return cells;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (cells.empty()) throw ValidationError("config has no grid cells");
  if (methods.empty()) throw ValidationError("config lists no methods");
  for (const Cell& c : cells) {
    MlsbmParams p(c.n, c.T, c.rho);
    if (c.n < 4) throw ValidationError("experiment cells need n >= 4");
  }
  for (const auto& m : methods) {
    RecoveryMethod rm = parse_method(m);
    if (kind == Kind::kDetection && rm == RecoveryMethod::kOracleTau)
      throw ValidationError("oracle-tau cannot drive a detection sweep");
    if (rm == RecoveryMethod::kMleExhaustive)
      for (const Cell& c : cells) {
        double candidates = binom(c.n, c.n / 2) * binom(c.T, c.T / 2);
        if (candidates > kMleCandidateLimit)
          throw SizeGuardError("mle-exhaustive in sweep: C(n,n/2) C(T,T/2) exceeds the candidate limit", candidates,
                               kMleCandidateLimit);
      }
  }
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::vector<std::string> known{"kind", "cells", "n",         "a",      "b",      "methods",
                                              "trials", "base_seed", "output_path", "overwrite", "timing", "rounds"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ValidationError("unknown config key '" + key + "'");
  ExperimentConfig c;
  try {
    if (j.contains("kind")) {
      auto k = j.at("kind").get<std::string>();
      if (k == "phase") c.kind = ExperimentConfig::Kind::kPhase;
      else if (k == "detection") c.kind = ExperimentConfig::Kind::kDetection;
      else throw ValidationError("kind must be 'phase' or 'detection'");
    }
    if (j.contains("cells")) {
      for (const auto& cell : j.at("cells")) {
        if (!cell.is_array() || cell.size() != 3) throw ValidationError("each cell must be [n, T, rho]");
        c.cells.push_back({cell[0].get<std::size_t>(), cell[1].get<std::size_t>(), cell[2].get<double>()});
      }
    }
    if (j.contains("n") || j.contains("a") || j.contains("b")) {
      if (!(j.contains("n") && j.contains("a") && j.contains("b")))
        throw ValidationError("exponent grids need all of n, a and b");
      auto more = exponent_grid(j.at("n").get<std::vector<std::size_t>>(), j.at("a").get<std::vector<double>>(),
                                j.at("b").get<std::vector<double>>());
      c.cells.insert(c.cells.end(), more.begin(), more.end());
    }
    if (j.contains("methods")) c.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("trials")) {
      auto t = j.at("trials").get<std::int64_t>();
      if (t < 0) throw ValidationError("trials must be at least 1");
      c.trials = static_cast<std::size_t>(t);
    }
    if (j.contains("base_seed")) c.base_seed = j.at("base_seed").get<Seed>();
    if (j.contains("output_path")) c.output_path = j.at("output_path").get<std::string>();
    if (j.contains("overwrite")) c.overwrite = j.at("overwrite").get<bool>();
    if (j.contains("timing")) c.timing = j.at("timing").get<bool>();
    if (j.contains("rounds")) {
      const auto& r = j.at("rounds");
      if (r.is_string()) {
        if (r.get<std::string>() != "auto") throw ValidationError("rounds must be a positive integer or \"auto\"");
        c.rounds = 0;
      } else {
        auto v = r.get<std::int64_t>();
        if (v < 1) throw ValidationError("rounds must be a positive integer or \"auto\"");
        c.rounds = static_cast<std::size_t>(v);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json cells = nlohmann::json::array();
  for (const Cell& cell : c.cells) cells.push_back({cell.n, cell.T, cell.rho});
  nlohmann::json j = {{"kind", kind_name(c.kind)}, {"cells", cells},         {"methods", c.methods},
                      {"trials", c.trials},        {"base_seed", c.base_seed}, {"output_path", c.output_path},
                      {"overwrite", c.overwrite},  {"timing", c.timing}};
  j["rounds"] = c.rounds == 0 ? nlohmann::json("auto") : nlohmann::json(c.rounds);
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

Seed trial_seed(Seed base_seed, std::size_t cell, std::size_t trial) {
  return derive_seed(base_seed, {kTrialStream, cell, trial});
}

std::size_t effective_workers(std::size_t requested) {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t w = requested == 0 ? hw : requested;
  if (const char* env = std::getenv("MLSBM_WORKERS")) {
    char* end = nullptr;
    unsigned long long cap = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) w = std::min<std::size_t>(w, cap);
  }
  return std::max<std::size_t>(1, w);
}

// ---------------------------------------------------------------------------

std::vector<TrialRecord> run_phase_diagram(const ExperimentConfig& config, std::size_t workers) {
  config.validate();
  std::vector<RecoveryMethod> methods;
  for (const auto& m : config.methods) methods.push_back(parse_method(m));
  const std::size_t units = config.cells.size() * config.trials;
  std::vector<TrialRecord> records(units * methods.size());

  parallel_for(units, effective_workers(workers), [&](std::size_t u) {
    const std::size_t cell = u / config.trials, trial = u % config.trials;
    const Cell& c = config.cells[cell];
    const Seed seed = trial_seed(config.base_seed, cell, trial);
    const PlantedInstance inst = sample_planted(MlsbmParams(c.n, c.T, c.rho), seed);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      auto start = std::chrono::steady_clock::now();
      RecoveryResult res;
      switch (methods[m]) {
        case RecoveryMethod::kBiasAdjusted: res = bias_adjusted_spectral(inst.graph); break;
        case RecoveryMethod::kAggregateSum: res = aggregate_sum_spectral(inst.graph); break;
        case RecoveryMethod::kOracleTau: res = oracle_tau_spectral(inst.graph, inst.tau); break;
        case RecoveryMethod::kMleExhaustive: res = mle_exhaustive(inst.graph); break;
        case RecoveryMethod::kMleLocal:
          res = mle_local_search(inst.graph, bias_adjusted_spectral(inst.graph).sigma_hat);
          break;
      }
      TrialRecord& r = records[u * methods.size() + m];
      r.cell = cell;
      r.n = c.n;
      r.T = c.T;
      r.rho = c.rho;
      r.method = config.methods[m];
      r.trial = trial;
      r.seed = seed;
      r.loss = hamming_loss(res.sigma_hat, inst.sigma).value;
      r.objective = res.objective;
      r.degenerate = res.degenerate;
      if (config.timing) r.wall_time_ms = elapsed_ms(start);
    }
  });
  return records;
}

std::vector<TrialRecord> run_detection_sweep(const ExperimentConfig& config, std::size_t workers) {
  config.validate();
  std::vector<RecoveryMethod> methods;
  for (const auto& m : config.methods) methods.push_back(parse_method(m));
  const std::size_t units = config.cells.size() * config.trials;
  const std::size_t per_unit = 2 * methods.size();
  std::vector<TrialRecord> records(units * per_unit);

  parallel_for(units, effective_workers(workers), [&](std::size_t u) {
    const std::size_t cell = u / config.trials, trial = u % config.trials;
    const Cell& c = config.cells[cell];
    const Seed seed = trial_seed(config.base_seed, cell, trial);
    const MlsbmParams params(c.n, c.T + 2, c.rho);
    const MultiLayerGraph graphs[2] = {sample_null(params, derive_seed(seed, {kNullStream})),
                                       sample_planted(params, seed).graph};
    for (std::size_t m = 0; m < methods.size(); ++m) {
      RecoverFn recover = make_recover(methods[m]);
      for (std::size_t h = 0; h < 2; ++h) {
        // planted record first, then null
        const std::size_t which = 1 - h;
        const MultiLayerGraph& g = graphs[which];
        auto start = std::chrono::steady_clock::now();
        std::size_t rounds = config.rounds == 0 ? default_rounds(g) : config.rounds;
        DetectionDecision d = shuffled_test(g, recover, rounds, derive_seed(seed, {kShuffleSeedStream, m, which}));
        TrialRecord& r = records[u * per_unit + m * 2 + h];
        r.cell = cell;
        r.n = c.n;
        r.T = c.T;
        r.rho = c.rho;
        r.method = std::string(which == 1 ? "detect-planted:" : "detect-null:") + config.methods[m];
        r.trial = trial;
        r.seed = seed;
        r.decision = d.decision;
        if (config.timing) r.wall_time_ms = elapsed_ms(start);
      }
    }
  });
  return records;
}

std::vector<CellRisk> detection_risks(const std::vector<TrialRecord>& records) {
  struct Acc {
    std::vector<Bit> truths, decisions;
  };
  std::map<std::pair<std::size_t, std::string>, Acc> acc;
  for (const auto& r : records) {
    if (!r.decision) continue;
    auto colon = r.method.find(':');
    if (colon == std::string::npos) continue;
    std::string tag = r.method.substr(0, colon);
    Bit truth;
    if (tag == "detect-planted") truth = 1;
    else if (tag == "detect-null") truth = 0;
    else continue;
    auto& a = acc[{r.cell, r.method.substr(colon + 1)}];
    a.truths.push_back(truth);
    a.decisions.push_back(*r.decision);
  }
  std::vector<CellRisk> out;
  for (const auto& [key, a] : acc)
    out.push_back({key.first, key.second, detection_risk(a.truths, a.decisions), a.truths.size() / 2});
  return out;
}

// ---------------------------------------------------------------------------

double median(std::vector<double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(xs.begin(), xs.end());
  std::size_t h = xs.size() / 2;
  return xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
}

nlohmann::json to_json(const GapSummary& s) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"n", s.cell.n},
          {"T", s.cell.T},
          {"rho", s.cell.rho},
          {"trials", s.trials},
          {"oracle_losses", s.oracle_losses},
          {"spectral_losses", s.spectral_losses},
          {"oracle_degenerate", s.oracle_degenerate},
          {"spectral_degenerate", s.spectral_degenerate},
          {"median_oracle", opt(s.median_oracle)},
          {"median_spectral", opt(s.median_spectral)},
          {"median_gap", opt(s.median_gap)},
          {"between_thresholds", s.between_thresholds},
          {"notes", s.notes}};
}

GapSummary run_gap_demo(std::size_t n, std::size_t T, double rho, std::size_t trials, Seed base_seed,
                        std::size_t workers) {
  if (n < 4 || n % 2 != 0) throw ValidationError("n must be an even integer >= 4");
  if (T < 2 || T % 2 != 0) throw ValidationError("T must be an even integer >= 2");
  if (!(rho >= 0.0) || !(rho < 2.0 / 3.0)) throw ValidationError("rho must lie in [0, 2/3)");
  if (trials < 1) throw ValidationError("trials must be at least 1");

  GapSummary s;
  s.cell = {n, T, rho};
  s.trials = trials;
  s.oracle_losses.resize(trials);
  s.spectral_losses.resize(trials);
  std::vector<char> odeg(trials), sdeg(trials);

  parallel_for(trials, effective_workers(workers), [&](std::size_t t) {
    const Seed seed = trial_seed(base_seed, 0, t);
    PlantedInstance inst = [&] {
      if (rho > 0.0) return sample_planted(MlsbmParams(n, T, rho), seed);
      Rng sr = make_rng(seed, {1}), tr = make_rng(seed, {2});
      Assignment sigma = random_assignment(n, sr);
      Assignment tau = random_assignment(T, tr);
      return PlantedInstance(MultiLayerGraph::empty(n, T), std::move(sigma), std::move(tau));
    }();
    RecoveryResult o = oracle_tau_spectral(inst.graph, inst.tau);
    RecoveryResult b = bias_adjusted_spectral(inst.graph);
    s.oracle_losses[t] = hamming_loss(o.sigma_hat, inst.sigma).value;
    s.spectral_losses[t] = hamming_loss(b.sigma_hat, inst.sigma).value;
    odeg[t] = o.degenerate;
    sdeg[t] = b.degenerate;
  });
  s.oracle_degenerate.assign(odeg.begin(), odeg.end());
  s.spectral_degenerate.assign(sdeg.begin(), sdeg.end());

  std::vector<double> ol, sl, gap;
  for (std::size_t t = 0; t < trials; ++t) {
    if (!odeg[t]) ol.push_back(s.oracle_losses[t]);
    if (!sdeg[t]) sl.push_back(s.spectral_losses[t]);
    if (!odeg[t] && !sdeg[t]) gap.push_back(s.spectral_losses[t] - s.oracle_losses[t]);
  }
  if (!ol.empty()) s.median_oracle = median(ol);
  if (!sl.empty()) s.median_spectral = median(sl);
  if (!gap.empty()) s.median_gap = median(gap);
  else s.notes.push_back("gap undefined: no trial where both methods produced a non-degenerate estimate");

  const double info = static_cast<double>(n) * static_cast<double>(T) * rho;
  const double comp = static_cast<double>(n) * std::sqrt(static_cast<double>(T)) * rho;
  s.between_thresholds = info >= 10.0 && comp <= 2.0;
  if (!s.between_thresholds) {
    std::ostringstream os;
    os << "warning: cell is not between the thresholds (n T rho = " << info << ", n sqrt(T) rho = " << comp << ")";
    s.notes.push_back(os.str());
  }
  return s;
}

// ---------------------------------------------------------------------------

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) os << (i ? "," : "") << kCsvColumns[i];
  os << '\n';
  for (const auto& r : records) {
    if (r.method.find_first_of(",\n") != std::string::npos)
      throw ValidationError("method names may not contain commas or newlines");
    os << r.cell << ',' << r.n << ',' << r.T << ',' << fmt_double(r.rho) << ',' << r.method << ',' << r.trial << ','
       << r.seed << ',' << (r.loss ? fmt_double(*r.loss) : "") << ','
       << (r.decision ? std::to_string(*r.decision) : "") << ','
       << (r.objective ? std::to_string(*r.objective) : "") << ','
       << (r.wall_time_ms ? fmt_double(*r.wall_time_ms) : "") << ',' << (r.degenerate ? 1 : 0) << '\n';
  }
}

std::vector<TrialRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("results CSV is empty");
  std::string header;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) header += (i ? "," : "") + kCsvColumns[i];
  if (line != header) throw ValidationError("results CSV header does not match the expected schema");

  std::vector<TrialRecord> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != kCsvColumns.size())
      throw ValidationError("results CSV line " + std::to_string(lineno) + " has the wrong number of fields");
    try {
      TrialRecord r;
      r.cell = std::stoull(f[0]);
      r.n = std::stoull(f[1]);
      r.T = std::stoull(f[2]);
      r.rho = std::stod(f[3]);
      r.method = f[4];
      r.trial = std::stoull(f[5]);
      r.seed = std::stoull(f[6]);
      if (!f[7].empty()) r.loss = std::stod(f[7]);
      if (!f[8].empty()) r.decision = static_cast<Bit>(std::stoi(f[8]));
      if (!f[9].empty()) r.objective = std::stoll(f[9]);
      if (!f[10].empty()) r.wall_time_ms = std::stod(f[10]);
      r.degenerate = f[11] == "1";
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ValidationError("results CSV line " + std::to_string(lineno) + " has a malformed field");
    }
  }
  return out;
}

void write_results(const std::vector<TrialRecord>& records, const std::filesystem::path& path,
                   const ExperimentConfig& config, bool overwrite) {
  std::filesystem::path sidecar = path;
  sidecar += ".json";
  for (const auto& p : {path, sidecar})
    if (!overwrite && std::filesystem::exists(p))
      throw IoError(p.string() + " already exists (pass the overwrite flag to replace it)");
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    write_csv(out, records);
    if (!out) throw IoError("write failed for " + path.string());
  }
  std::ofstream side(sidecar, std::ios::trunc);
  if (!side) throw IoError("cannot write " + sidecar.string());
  side << to_json(config).dump(2) << '\n';
  if (!side) throw IoError("write failed for " + sidecar.string());
}

std::vector<TrialRecord> read_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_csv(in);
}

}  // namespace mlsbm
