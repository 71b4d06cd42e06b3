#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "randpoly/ensembles.hpp"
#include "randpoly/interval.hpp"
#include "randpoly/kacrice.hpp"
#include "randpoly/montecarlo.hpp"
#include "randpoly/noise.hpp"

namespace randpoly {

std::string_view version();

/// Flat experiment configuration. Every key has a registry default except
/// the seed, which must always be given.
///
/// profile: "kac" | "hyperbolic" | "power" | "mixed-sign" | "hyperbolic-derivative"
///   kac                    hyperbolic_profile(1, n, mu)
///   hyperbolic             hyperbolic_profile(L, n, mu)
///   power                  power_profile(n, rho, mu, rho_mean)
///   mixed-sign             mixed_sign_profile(n, rho, rho_prime, rho_dprime)
///   hyperbolic-derivative  derivative_profile(hyperbolic_profile(L, n, mu), k)
struct ExperimentConfig {
  std::string name;
  std::string profile = "kac";
  double L = 1.0;
  double mu = 0.0;
  double rho = 0.0;
  double rho_mean = 0.0;
  double rho_prime = 0.0;
  double rho_dprime = -1.0;
  std::size_t k = 0;
  NoiseSpec noise;
  /// Second ensemble of the universality comparison.
  NoiseSpec compare_noise{NoiseFamily::rademacher, 0.0};
  std::vector<std::size_t> n_list;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  /// Interval set in the text form of parse_interval_set.
  std::string interval = "R";
  /// Window half-width (pair counts) or distance of z from 1 (small ball).
  double delta = 1.0 / 16.0;
  /// Small-ball radii, in the order they are tested.
  std::vector<double> thresholds;
  ErfDenominator erf_denominator = ErfDenominator::sqrt_s;
  unsigned threads = 0;
  std::string output = ".";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Profile of the configured family at degree n.
CoefficientProfile make_profile(const ExperimentConfig& cfg, std::size_t n);

/// One row of results. `series` separates the several estimates of one
/// experiment ("" for the main one); `param` is the small-ball radius.
struct ExperimentPoint {
  std::string series;
  std::size_t n = 0;
  double param = 0.0;
  TrialStatistics stats;
  std::optional<double> predicted;
  std::string regime;

  friend bool operator==(const ExperimentPoint&, const ExperimentPoint&) = default;
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::string theorem;
  std::vector<ExperimentPoint> points;
  /// Fit of the measured main series against ln n, and of the analytic
  /// Kac-Rice values when they exist.
  std::optional<SlopeFit> fit;
  std::optional<SlopeFit> analytic_fit;
  std::optional<double> predicted_slope;
  double tolerance = 0.0;
  /// Present only when the experiment has a prediction to compare with.
  std::optional<bool> verdict;
  std::string verdict_detail;
  double wall_clock_seconds = 0.0;
  std::string artifact_version;

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

/// A registry entry: the tolerances are fixed per experiment.
struct ExperimentSpec {
  std::string name;
  std::string theorem;
  std::string description;
  /// Relative tolerance on the fitted slope (or the absolute bound the
  /// experiment checks; see description).
  double tolerance = 0.0;
  /// Relative tolerance on the analytic Kac-Rice slope, when checked.
  std::optional<double> analytic_tolerance;
  ExperimentConfig defaults;
};

const std::vector<ExperimentSpec>& experiment_registry();
/// Throws std::invalid_argument listing the valid names.
const ExperimentSpec& find_experiment(const std::string& name);

/// Registry defaults overridden by the keys of a flat JSON document. The
/// document must carry "name" and "seed".
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Checks the invariants: known name, strictly increasing non-empty n-list,
/// and so on. Throws std::invalid_argument.
void validate(const ExperimentConfig& cfg);

/// Runs the experiment without touching the file system.
ExperimentRecord compute_experiment(const ExperimentConfig& cfg);

/// compute_experiment, then writes <output>/<name>-<hash>.csv and .json.
ExperimentRecord run_experiment(const ExperimentConfig& cfg);

nlohmann::json record_to_json(const ExperimentRecord& r);
ExperimentRecord record_from_json(const nlohmann::json& j);

/// "experiment,n,trials,mean_N,stderr,predicted,regime,verdict" rows.
std::string record_csv(const ExperimentRecord& r);

/// Short content hash of the record's numeric output (config and rows).
std::string record_hash(const ExperimentRecord& r);

/// Writes one plot-data file per record and a summary table into dir.
/// Returns the written paths. Throws on an empty list or an I/O failure.
std::vector<std::filesystem::path> emit_report(const std::vector<ExperimentRecord>& records,
                                               const std::filesystem::path& dir);

/// Loads every record JSON found in dir.
std::vector<ExperimentRecord> load_records(const std::filesystem::path& dir);

}  // namespace randpoly
