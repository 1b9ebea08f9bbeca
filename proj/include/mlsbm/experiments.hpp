#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mlsbm/model.hpp"

namespace mlsbm {

struct Cell {
  std::size_t n = 0;
  std::size_t T = 0;
  double rho = 0.0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Grid T = n^a, rho = n^-b; T is rounded to the nearest even integer >= 2.
std::vector<Cell> exponent_grid(const std::vector<std::size_t>& ns, const std::vector<double>& as,
                                const std::vector<double>& bs);

struct ExperimentConfig {
  enum class Kind { kPhase, kDetection };

  Kind kind = Kind::kPhase;
  std::vector<Cell> cells;
  std::vector<std::string> methods{"bias-adjusted"};
  std::size_t trials = 1;
  Seed base_seed = 0;
  std::string output_path;
  bool overwrite = false;
  /// Measure wall time per method; off by default so reruns are byte-identical.
  bool timing = false;
  /// Shuffling rounds for detection sweeps; 0 = max(1, ceil(log(n^2 rho_hat + 2))).
  std::size_t rounds = 1;

  void validate() const;
};

/// Flat JSON object. Grids come either as "cells": [[n, T, rho], ...] or as
/// "n", "a", "b" arrays.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path);

struct TrialRecord {
  std::size_t cell = 0;
  std::size_t n = 0;
  std::size_t T = 0;
  double rho = 0.0;
  std::string method;
  std::size_t trial = 0;
  Seed seed = 0;
  std::optional<double> loss;
  std::optional<Bit> decision;
  std::optional<std::int64_t> objective;
  std::optional<double> wall_time_ms;
  bool degenerate = false;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Instance seed for one (cell, trial); every method of that trial sees the
/// same instance.
Seed trial_seed(Seed base_seed, std::size_t cell, std::size_t trial);

/// Requested worker count capped by MLSBM_WORKERS; 0 = hardware concurrency.
std::size_t effective_workers(std::size_t requested);

std::vector<TrialRecord> run_phase_diagram(const ExperimentConfig& config, std::size_t workers = 1);

/// Method tags produced by run_detection_sweep: "detect-planted:<recover>"
/// and "detect-null:<recover>".
std::vector<TrialRecord> run_detection_sweep(const ExperimentConfig& config, std::size_t workers = 1);

struct CellRisk {
  std::size_t cell = 0;
  std::string method;
  double risk = 0.0;
  std::size_t trials = 0;
};

/// Type-I plus type-II rate per (cell, recover method) of a detection sweep.
std::vector<CellRisk> detection_risks(const std::vector<TrialRecord>& records);

struct GapSummary {
  Cell cell;
  std::size_t trials = 0;
  std::vector<double> oracle_losses;
  std::vector<double> spectral_losses;
  std::vector<bool> oracle_degenerate;
  std::vector<bool> spectral_degenerate;
  std::optional<double> median_oracle;
  std::optional<double> median_spectral;
  /// median(spectral - oracle); empty when every trial was degenerate.
  std::optional<double> median_gap;
  bool between_thresholds = false;
  std::vector<std::string> notes;
};

nlohmann::json to_json(const GapSummary& s);

/// Paired oracle-tau vs bias-adjusted runs. rho = 0 is accepted and yields
/// empty graphs.
GapSummary run_gap_demo(std::size_t n, std::size_t T, double rho, std::size_t trials, Seed base_seed,
                        std::size_t workers = 1);

inline const std::vector<std::string> kCsvColumns{"cell",   "n",        "T",         "rho",
                                                  "method", "trial",    "seed",      "loss",
                                                  "decision", "objective", "wall_time_ms", "degenerate"};

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_csv(std::istream& is);

/// Writes path (CSV) and path + ".json" (config sidecar). Refuses to replace
/// an existing file unless overwrite is set.
void write_results(const std::vector<TrialRecord>& records, const std::filesystem::path& path,
                   const ExperimentConfig& config, bool overwrite);
std::vector<TrialRecord> read_results(const std::filesystem::path& path);

double median(std::vector<double> xs);

}  // namespace mlsbm
