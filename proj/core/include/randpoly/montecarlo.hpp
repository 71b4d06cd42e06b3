#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "randpoly/ensembles.hpp"
#include "randpoly/interval.hpp"
#include "randpoly/noise.hpp"

namespace randpoly {

/// Summary of per-trial values. Statistics are over the accepted trials
/// (trials - discarded); with nothing discarded the two coincide.
struct TrialStatistics {
  double mean = 0.0;
  double variance = 0.0;  // sample variance, n - 1 denominator
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t discarded = 0;
  /// discarded / trials > kMaxDiscardRate.
  bool flagged = false;

  std::uint64_t accepted() const { return trials - discarded; }
  friend bool operator==(const TrialStatistics&, const TrialStatistics&) = default;
};

inline constexpr double kMaxDiscardRate = 1e-3;

/// Mean, variance, stderr and 95% CI of `values` in index order. `trials`
/// counts the discarded ones too.
TrialStatistics summarize(std::span<const double> values, std::uint64_t trials);

struct MonteCarloOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// First trial index. Runs over [first_trial, first_trial + trials) can be
  /// pooled with other ranges of the same seed.
  std::uint64_t first_trial = 0;
};

/// Marker for a trial whose count could not be certified.
inline constexpr int kDiscardedCount = -1;

/// Root counts of each sample in each interval: result[i][trial]. A trial is
/// discarded (kDiscardedCount in every interval) when the draw is the zero
/// polynomial or some count could not be certified. Uncertified bisection
/// counts fall back to the exact Sturm count up to kSturmMaxDegree.
std::vector<std::vector<int>> simulate_counts(const CoefficientProfile& p, const NoiseSpec& noise,
                                              std::span<const Interval> intervals,
                                              std::uint64_t trials, std::uint64_t seed,
                                              const MonteCarloOptions& opts = {});

/// Statistics of N(I)^k over the kept entries of one row of simulate_counts.
TrialStatistics count_statistics(std::span<const int> counts, int k = 1);

/// Mean of N(I) over independent samples.
TrialStatistics estimate_EN(const CoefficientProfile& p, const NoiseSpec& noise, const Interval& iv,
                            std::uint64_t trials, std::uint64_t seed,
                            const MonteCarloOptions& opts = {});

/// Mean of N(I)^k, 1 <= k <= 4.
TrialStatistics estimate_moment(const CoefficientProfile& p, const NoiseSpec& noise,
                                const Interval& iv, int k, std::uint64_t trials,
                                std::uint64_t seed, const MonteCarloOptions& opts = {});

struct SmallBallEstimate {
  double probability = 0.0;
  double std_error = 0.0;  // binomial
  std::uint64_t trials = 0;
};

/// Fraction of samples with |p(z) - u| <= t. Needs at least 1000 trials.
SmallBallEstimate small_ball(const CoefficientProfile& p, const NoiseSpec& noise, double z,
                             double u, double t, std::uint64_t trials, std::uint64_t seed,
                             const MonteCarloOptions& opts = {});

/// Same, for several thresholds on one set of samples; the estimates are
/// therefore monotone in t sample by sample.
std::vector<SmallBallEstimate> small_ball(const CoefficientProfile& p, const NoiseSpec& noise,
                                          double z, double u, std::span<const double> t,
                                          std::uint64_t trials, std::uint64_t seed,
                                          const MonteCarloOptions& opts = {});

inline constexpr double kPairWindowBand = 0.25;

/// Mean of N (N - 1) for N the count in the open window
/// (center - delta, center + delta), which must lie inside
/// {1 - band <= |t| <= 1 + band}.
TrialStatistics pair_count(const CoefficientProfile& p, const NoiseSpec& noise, double center,
                           double delta, std::uint64_t trials, std::uint64_t seed,
                           const MonteCarloOptions& opts = {}, double band = kPairWindowBand);

struct SlopePoint {
  double n = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// Standard error of the slope: from the stated errors when weighted,
  /// from the residuals otherwise.
  double slope_stderr = 0.0;
  bool weighted = false;

  double ci_lo() const { return slope - 1.96 * slope_stderr; }
  double ci_hi() const { return slope + 1.96 * slope_stderr; }

  friend bool operator==(const SlopeFit&, const SlopeFit&) = default;
};

/// Least squares of value against ln n with weights 1/stderr^2; unit
/// weights when any stderr is zero. Needs >= 3 points with distinct n.
SlopeFit slope_fit(std::span<const SlopePoint> points);

/// Smallest m with 4 l2_bound / (m lambda^2) <= failure_prob.
std::uint64_t trials_needed(double lambda, double failure_prob, double l2_bound);

}  // namespace randpoly
