#include "randpoly/kacrice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadrature.hpp"
#include "randpoly/polyeval.hpp"
#include "randpoly/rootcount.hpp"

namespace randpoly {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;

KacRiceDensity integrand_from_moments(const ScaledMoments& s, ErfDenominator denom) {
  KacRiceDensity d;
  const double P = s.P, Q = s.Q, R = s.R;
  if (!(P > 0.0)) return d;
  const double S = std::max(0.0, P * Q - R * R);
  const double m = s.m0, m1 = s.m1;

  if (S > 0.0) {
    const double num = std::max(0.0, m * m * Q + m1 * m1 * P - 2.0 * m * m1 * R);
    d.i1 = std::sqrt(S) / (kPi * P) * std::exp(-num / (2.0 * S));
  }

  const double eta = std::abs(m1 * P - m * R);
  if (eta > 0.0) {
    double e = 0.5 * kSqrtPi;  // erf_integral(+inf)
    if (S > 0.0) {
      double arg = eta / (std::sqrt(2.0 * P) * std::sqrt(S));
      if (denom == ErfDenominator::literal_s) {
        // Not scale-free: undo the common normalization of the moments.
        arg = eta / (std::sqrt(2.0 * P) * S) * std::exp(-2.0 * s.log_sigma);
      }
      e = erf_integral(arg);
    }
    const double log_front = std::log(std::numbers::sqrt2 * eta / kPi) - 1.5 * std::log(P);
    d.i2 = std::exp(log_front - m * m / (2.0 * P)) * e;
  }
  return d;
}

std::vector<double> graded_knots(double lo, double hi, std::size_t n) {
  const double nd = static_cast<double>(std::max<std::size_t>(n, 1));
  std::vector<double> k{lo, hi, 0.0, 1.0 - 1.0 / nd, -1.0 + 1.0 / nd};
  for (double s = 0.5; s >= 1.0 / (16.0 * nd); s *= 0.5) {
    k.push_back(1.0 - s);
    k.push_back(s - 1.0);
  }
  std::sort(k.begin(), k.end());
  k.erase(std::remove_if(k.begin(), k.end(), [&](double x) { return x < lo || x > hi; }),
          k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

void require_random(const CoefficientProfile& p) {
  if (!p.random()) {
    throw std::invalid_argument("Kac-Rice needs a random profile: c is identically zero");
  }
}

}  // namespace

double erf_integral(double x) { return 0.5 * kSqrtPi * std::erf(x); }

std::string_view to_string(ErfDenominator d) {
  return d == ErfDenominator::sqrt_s ? "sqrt-s" : "literal-s";
}

ErfDenominator erf_denominator_from_string(std::string_view s) {
  if (s == "sqrt-s" || s == "sqrt_s") return ErfDenominator::sqrt_s;
  if (s == "literal-s" || s == "literal_s") return ErfDenominator::literal_s;
  throw std::invalid_argument("unknown erf denominator '" + std::string(s) +
                              "' (expected sqrt-s or literal-s)");
}

KacRiceDensity kac_rice_integrand(const CoefficientProfile& p, double t,
                                  const KacRiceOptions& opts) {
  return integrand_from_moments(scaled_moments(p, t), opts.erf_denominator);
}

double density_centered_reciprocal(const CoefficientProfile& p, double t) {
  return density_centered(p.reciprocal(), t);
}

double density_centered(const CoefficientProfile& p, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("density needs a finite point");
  if (std::abs(t) > 1.0) {
    const double y = 1.0 / t;
    return density_centered(p.reciprocal(), y) * y * y;
  }
  const ScaledMoments s = scaled_moments(p, t);
  if (!(s.P > 0.0)) throw std::domain_error("density undefined: Var r_n(t) = 0");
  return std::sqrt(std::max(0.0, s.S())) / (kPi * s.P);
}

KacRiceResult kac_rice_interval(const CoefficientProfile& p, const Interval& iv,
                                const KacRiceOptions& opts) {
  require_random(p);
  KacRiceResult res;
  res.interval = iv;
  res.profile_id = p.id();
  res.abs_tol = opts.abs_tol;
  res.rel_tol = opts.rel_tol;
  if (iv.empty()) return res;

  std::vector<std::pair<Interval, bool>> parts;  // (piece inside [-1, 1], reciprocal?)
  if (auto inner = intersect(iv, Interval::closed(-1.0, 1.0))) parts.emplace_back(*inner, false);
  for (const Interval& im : reciprocal_image(iv)) parts.emplace_back(im, true);

  const std::size_t n = p.degree();
  std::size_t budget = opts.max_evaluations;
  for (const auto& [piece, reciprocal] : parts) {
    if (!(piece.lo < piece.hi)) continue;
    const CoefficientProfile prof = reciprocal ? p.reciprocal() : p;
    auto f = [&](double t) -> detail::Pair {
      const KacRiceDensity d = kac_rice_integrand(prof, t, opts);
      return {d.i1, d.i2};
    };
    // Tolerances are shared across pieces so that the sum meets them.
    const double share = 1.0 / static_cast<double>(parts.size());
    const auto q = detail::integrate(f, graded_knots(piece.lo, piece.hi, n),
                                     opts.abs_tol * share, opts.rel_tol, budget);
    res.i1 += q.value[0];
    res.i2 += q.value[1];
    res.error_estimate += q.error;
    res.evaluations += q.evaluations;
    res.converged = res.converged && q.converged;
    budget = budget > q.evaluations ? budget - q.evaluations : 0;
  }
  if (p.centered()) res.i2 = 0.0;
  res.total = res.i1 + res.i2;
  res.converged = res.converged &&
                  res.error_estimate <= std::max(opts.abs_tol, opts.rel_tol * res.total);
  return res;
}

KacRiceResult expected_total(const CoefficientProfile& p, const KacRiceOptions& opts) {
  return kac_rice_interval(p, Interval::real_line(), opts);
}

std::string_view to_string(SlopeFamily f) {
  switch (f) {
    case SlopeFamily::centered_power: return "centered-power";
    case SlopeFamily::hyperbolic_nonzero_mean: return "hyperbolic-nonzero-mean";
    case SlopeFamily::hyperbolic_derivative: return "hyperbolic-derivative";
    case SlopeFamily::mean_dominated: return "mean-dominated";
  }
  return "unknown";
}

SlopeFamily slope_family_from_string(std::string_view s) {
  if (s == "centered-power") return SlopeFamily::centered_power;
  if (s == "hyperbolic-nonzero-mean") return SlopeFamily::hyperbolic_nonzero_mean;
  if (s == "hyperbolic-derivative") return SlopeFamily::hyperbolic_derivative;
  if (s == "mean-dominated") return SlopeFamily::mean_dominated;
  throw std::invalid_argument(
      "unknown slope family '" + std::string(s) +
      "' (expected centered-power, hyperbolic-nonzero-mean, hyperbolic-derivative, "
      "mean-dominated)");
}

SlopePrediction asymptotic_slope(SlopeFamily family, double a, double b) {
  switch (family) {
    case SlopeFamily::centered_power:
      if (!(a > -0.5)) throw std::invalid_argument("centered-power slope needs rho > -1/2");
      return {(1.0 + std::sqrt(2.0 * a + 1.0)) / kPi, "noise-dominated", "small-mean"};
    case SlopeFamily::hyperbolic_nonzero_mean:
      if (!(a > 0.0)) throw std::invalid_argument("hyperbolic slope needs L > 0");
      return {(1.0 + std::sqrt(a)) / (2.0 * kPi), "mixed", "hyperbolic-mean"};
    case SlopeFamily::hyperbolic_derivative:
      if (!(a > 0.0) || b < 0.0) {
        throw std::invalid_argument("hyperbolic derivative slope needs L > 0 and k >= 0");
      }
      return {(1.0 + std::sqrt(a + 2.0 * b)) / (2.0 * kPi), "mixed", "hyperbolic-derivative"};
    case SlopeFamily::mean_dominated:
      return {0.0, "mean-dominated", "large-mean"};
  }
  throw std::invalid_argument("unknown slope family");
}

double dominance_functional_T(const CoefficientProfile& p, double t, bool reciprocal) {
  if (std::abs(t) <= 1.0) {
    const ScaledMoments s = reciprocal ? scaled_moments(p.reciprocal(), t) : scaled_moments(p, t);
    if (!(s.P > 0.0) || !(s.Q > 0.0)) {
      throw std::domain_error("dominance functional undefined: vanishing variance");
    }
    if (p.centered()) return 0.0;
    return s.m0 * s.m0 / s.P + s.m1 * s.m1 / s.Q;
  }
  const double m = mean_derivatives(p, t, 0, reciprocal);
  const double m1 = mean_derivatives(p, t, 1, reciprocal);
  const double P = variance_derivatives(p, t, 0, reciprocal);
  const double Q = variance_derivatives(p, t, 1, reciprocal);
  if (!(P > 0.0) || !(Q > 0.0)) {
    throw std::domain_error("dominance functional undefined: vanishing variance");
  }
  return m * m / P + m1 * m1 / Q;
}

}  // namespace randpoly
