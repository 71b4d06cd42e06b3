#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "randpoly/ensembles.hpp"
#include "randpoly/interval.hpp"

namespace randpoly {

/// Value and first two derivatives of a polynomial at one point.
///
/// The true values are (p, dp, d2p) * exp(log_scale). For |t| <= 1 the scale
/// is zero; for |t| > 1 evaluation goes through the reciprocal polynomial and
/// the factor |t|^n is carried in log form so high degrees cannot overflow.
struct Evaluation {
  double p = 0.0;
  double dp = 0.0;
  double d2p = 0.0;
  double log_scale = 0.0;

  double value() const;
  double derivative() const;
  double second_derivative() const;
};

Evaluation eval_with_derivatives(std::span<const double> coeffs, double t, int order = 2);
Evaluation eval_with_derivatives(const PolynomialSample& s, double t, int order = 2);

/// z^n p(1/z): the coefficient sequence reversed, degree kept at n.
PolynomialSample reciprocal_transform(const PolynomialSample& s);

/// m_n^{(k)}(t) = sum_j b_j j!/(j-k)! t^{j-k}, k in {0, 1, 2}.
double mean_derivatives(const CoefficientProfile& p, double t, int k, bool reciprocal = false);

/// Var[r_n^{(k)}(t)] = sum_j c_j^2 (j!/(j-k)!)^2 t^{2(j-k)}, k in {0, 1, 2}.
double variance_derivatives(const CoefficientProfile& p, double t, int k, bool reciprocal = false);

/// P = Var r_n(t), Q = Var r_n'(t), R = Cov(r_n(t), r_n'(t)), S = PQ - R^2.
struct VarianceBundle {
  double P = 0.0;
  double Q = 0.0;
  double R = 0.0;
  double S = 0.0;
  double S_unclamped = 0.0;
};

VarianceBundle pqrs(const CoefficientProfile& p, double t);

/// Mean derivatives and noise covariances at t, all divided by a common
/// positive factor: means by sigma, second moments by sigma^2, where
/// log_sigma = log(sigma). Every ratio used by the Kac-Rice integrands and
/// the dominance tests is invariant under this scaling.
struct ScaledMoments {
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  double P = 0.0, Q = 0.0, R = 0.0, V2 = 0.0;
  double log_sigma = 0.0;

  double S() const;
};

/// Requires |t| <= 1 (the reciprocal profile covers |t| > 1).
ScaledMoments scaled_moments(const CoefficientProfile& p, double t);

/// sum_{j=1}^n (n+1-j)^beta j^alpha t^j and its two-regime power-law model.
struct PowerSum {
  double exact = 0.0;
  double asymptotic = 0.0;
};

/// Branch constant c of the power-sum model (t <= 1 - c/n versus |1 - t| <= c/n).
inline constexpr double kPowerSumBranch = 1.0;

PowerSum power_sum(std::size_t n, double alpha, double beta, double t);

/// The annulus radii at distance ~delta from the unit circle, collapsing to
/// a 1/n neighbourhood once delta < 1/(10 n).
struct LocalAnnulus {
  double delta = 0.0;
  std::size_t n = 0;
  double inner = 0.0;
  double outer = 0.0;
};

LocalAnnulus interval_Idelta(double delta, std::size_t n);

/// Extend each finite endpoint e outward by factor * (|1 - |e|| + 1/n).
Interval enlargement(const Interval& iv, std::size_t n, double factor = 1.0);

}  // namespace randpoly
