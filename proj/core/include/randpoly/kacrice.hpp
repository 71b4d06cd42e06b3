#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "randpoly/ensembles.hpp"
#include "randpoly/interval.hpp"

namespace randpoly {

/// erf(x) = int_0^x exp(-s^2) ds, without the 2/sqrt(pi) factor of std::erf:
/// erf_integral(x) = sqrt(pi)/2 * std::erf(x).
double erf_integral(double x);

/// Denominator inside the I2 error function.
///   sqrt_s     |m'P - mR| / (sqrt(2P) sqrt(S)), the Gaussian conditional
///              mean over its standard deviation (default)
///   literal_s  |m'P - mR| / (sqrt(2P) S)
enum class ErfDenominator { sqrt_s, literal_s };

std::string_view to_string(ErfDenominator d);
ErfDenominator erf_denominator_from_string(std::string_view s);

struct KacRiceOptions {
  double abs_tol = 1e-8;
  double rel_tol = 1e-6;
  std::size_t max_evaluations = 1'000'000;
  ErfDenominator erf_denominator = ErfDenominator::sqrt_s;
};

/// E N(I) = i1 + i2 for a Gaussian ensemble.
struct KacRiceResult {
  double i1 = 0.0;
  double i2 = 0.0;
  double total = 0.0;
  double error_estimate = 0.0;
  Interval interval;
  std::string profile_id;
  std::size_t evaluations = 0;
  /// error_estimate <= max(abs_tol, rel_tol * total) within the budget.
  bool converged = true;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
};

/// Pointwise I1 and I2 integrands at t; |t| <= 1 (use the reciprocal profile
/// beyond). The I2 integrand vanishes identically for centered profiles.
struct KacRiceDensity {
  double i1 = 0.0;
  double i2 = 0.0;
};
KacRiceDensity kac_rice_integrand(const CoefficientProfile& p, double t,
                                  const KacRiceOptions& opts = {});

/// sqrt(S) / (pi P): the real-root density of the centered part at t.
/// For |t| > 1 it is evaluated through the reciprocal profile with the
/// Jacobian 1/t^2. Throws when P(t) = 0.
double density_centered(const CoefficientProfile& p, double t);

/// Same density for the reciprocal polynomial at t (|t| <= 1).
double density_centered_reciprocal(const CoefficientProfile& p, double t);

/// Adaptive Gauss-Kronrod quadrature of I1 and I2 over iv. The part beyond
/// +-1 is integrated as the reciprocal profile over the inverted interval.
KacRiceResult kac_rice_interval(const CoefficientProfile& p, const Interval& iv,
                                const KacRiceOptions& opts = {});

/// Integral over the whole real line.
KacRiceResult expected_total(const CoefficientProfile& p, const KacRiceOptions& opts = {});

/// Coefficient of log n in the expected number of real roots.
enum class SlopeFamily { centered_power, hyperbolic_nonzero_mean, hyperbolic_derivative,
                         mean_dominated };

std::string_view to_string(SlopeFamily f);
SlopeFamily slope_family_from_string(std::string_view s);

struct SlopePrediction {
  double slope = 0.0;
  std::string regime;
  std::string theorem;
};

/// centered_power(rho):            (1 + sqrt(2 rho + 1)) / pi
/// hyperbolic_nonzero_mean(L):     (1 + sqrt L) / (2 pi)
/// hyperbolic_derivative(L, k):    (1 + sqrt(L + 2k)) / (2 pi)
/// mean_dominated:                 0
SlopePrediction asymptotic_slope(SlopeFamily family, double a = 0.0, double b = 0.0);

/// T = m^2 / P + m'^2 / Q (starred quantities when reciprocal is set).
/// Throws when P or Q vanishes.
double dominance_functional_T(const CoefficientProfile& p, double t, bool reciprocal = false);

}  // namespace randpoly
