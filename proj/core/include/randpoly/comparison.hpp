#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "randpoly/ensembles.hpp"
#include "randpoly/interval.hpp"
#include "randpoly/kacrice.hpp"

namespace randpoly {

enum class Regime { mean_dominated, noise_dominated, mixed, indeterminate };

std::string_view to_string(Regime r);
Regime regime_from_string(std::string_view s);

/// |m^{(k)}(t)| / sqrt(Var r^{(k)}(t)), k in {0, 1, 2}. With `reciprocal` the
/// starred pair (reversed b and c) is used at the same point t. Throws when
/// the variance vanishes.
double dominance_ratio(const CoefficientProfile& p, double t, int k, bool reciprocal = false);

struct ClassifierOptions {
  /// Threshold constant in |m| > C sqrt|log s| sqrt(Var r).
  double C = 3.0;
  /// Points per grid segment; segments are the inner (|t| <= 1) and outer
  /// (|t| >= 1) halves of each side.
  std::size_t grid_size = 256;
  /// Half-width c of the band {1 - c <= |t| <= 1 + c} the test is run in.
  double band = 1.0 / 16.0;
  /// Factor of the enlargement J of the input interval.
  double enlargement_factor = 1.0;
};

/// Verdict for the part of J near one of +-1.
struct SideReport {
  int side = 0;  // -1 or +1
  Regime regime = Regime::indeterminate;
  Interval span;  // J clipped to the band on this side
  /// Largest eps with ratio_k(s) <= s^eps on the whole grid, min over
  /// k = 0, 1. Positive eps means the power envelope phi(s) = s^eps holds.
  double epsilon = 0.0;
  /// Largest k = 2 ratio on the grid; noise domination needs it <= C.
  double k2_max = 0.0;
  /// Largest ratio seen over k = 0, 1, 2.
  double worst_ratio = 0.0;
  /// min over the grid of ratio_0 / (C sqrt|log s|); > 1 means mean-dominated.
  double min_margin = 0.0;
  /// Evaluation points t (original coordinate).
  std::vector<double> grid;
};

struct RegimeReport {
  Regime regime = Regime::indeterminate;
  Interval interval;
  Interval enlarged;
  /// True when J reached outside the band and was cut back to it.
  bool clipped = false;
  double C = 0.0;
  std::size_t grid_size = 0;
  std::vector<SideReport> sides;

  /// Witnesses aggregated over the sides: smallest epsilon among the
  /// noise-dominated sides and smallest margin among the mean-dominated ones.
  double epsilon = 0.0;
  double worst_ratio = 0.0;
  double min_margin = 0.0;
};

RegimeReport classify_regime(const CoefficientProfile& p, const Interval& iv,
                             const ClassifierOptions& opts = {});

/// Expected-count prediction following the regime.
///   centered profile  Kac-Rice on the profile itself (exact, no O(1) band)
///   noise-dominated   Kac-Rice of the centered profile + O(1)
///   mean-dominated    O(1); `value` holds Kac-Rice of the full profile
///   mixed             noise sides centered, everything else full profile, + O(1)
///   indeterminate     no value
struct CountPrediction {
  Regime regime = Regime::indeterminate;
  std::optional<double> value;
  bool bounded_error_band = false;  // value is only determined up to O(1)
  bool order_one = false;           // the prediction itself is O(1)
  std::string description;
  RegimeReport report;
};

CountPrediction predict_count(const CoefficientProfile& p, const Interval& iv,
                              const ClassifierOptions& opts = {},
                              const KacRiceOptions& kr = {});

}  // namespace randpoly
