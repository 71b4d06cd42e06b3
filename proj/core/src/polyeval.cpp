#include "randpoly/polyeval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace randpoly {

namespace {

constexpr double kUnderflowGuard = 1e-200;
constexpr double kTailCutoff = 1e-150;
constexpr double kTailFloor = 1e-100;

struct Horner3 {
  double p = 0.0, d1 = 0.0, half_d2 = 0.0;
};

// Horner over coefficients in ascending order, evaluated high to low.
Horner3 horner(std::span<const double> a, double t) {
  Horner3 h;
  for (std::size_t i = a.size(); i-- > 0;) {
    h.half_d2 = h.half_d2 * t + h.d1;
    h.d1 = h.d1 * t + h.p;
    h.p = h.p * t + a[i];
  }
  return h;
}

// Horner of the reversed sequence (the reciprocal polynomial) without a copy.
Horner3 horner_reversed(std::span<const double> a, double x) {
  Horner3 h;
  for (std::size_t i = 0; i < a.size(); ++i) {
    h.half_d2 = h.half_d2 * x + h.d1;
    h.d1 = h.d1 * x + h.p;
    h.p = h.p * x + a[i];
  }
  return h;
}

double falling(std::size_t j, int k) {
  double f = 1.0;
  for (int i = 0; i < k; ++i) f *= static_cast<double>(j) - i;
  return f;
}

void check_order(int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("derivative order must be 0, 1 or 2");
}

ScaledMoments moments_log_domain(const std::vector<double>& b, const std::vector<double>& c,
                                 double t) {
  // Factor out the largest term in log form; only reached when the direct
  // pass underflows, which needs t != 0.
  const double lt = std::log(std::abs(t));
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double jd = static_cast<double>(j);
    if (c[j] != 0.0) top = std::max(top, std::log(std::abs(c[j])) + jd * lt);
    if (b[j] != 0.0) top = std::max(top, std::log(std::abs(b[j])) + jd * lt);
  }
  ScaledMoments s;
  s.log_sigma = top;
  const bool negative = t < 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double jd = static_cast<double>(j);
    const double sign_t = (negative && (j % 2 == 1)) ? -1.0 : 1.0;
    const double d1 = jd / t;
    const double d2 = jd * (jd - 1.0) / (t * t);
    if (c[j] != 0.0) {
      const double g0 = std::copysign(std::exp(std::log(std::abs(c[j])) + jd * lt - top), c[j]) * sign_t;
      s.P += g0 * g0;
      s.Q += (g0 * d1) * (g0 * d1);
      s.R += g0 * (g0 * d1);
      s.V2 += (g0 * d2) * (g0 * d2);
    }
    if (b[j] != 0.0) {
      const double h0 = std::copysign(std::exp(std::log(std::abs(b[j])) + jd * lt - top), b[j]) * sign_t;
      s.m0 += h0;
      s.m1 += h0 * d1;
      s.m2 += h0 * d2;
    }
  }
  return s;
}

}  // namespace

double Evaluation::value() const { return log_scale == 0.0 ? p : p * std::exp(log_scale); }
double Evaluation::derivative() const {
  return log_scale == 0.0 ? dp : dp * std::exp(log_scale);
}
double Evaluation::second_derivative() const {
  return log_scale == 0.0 ? d2p : d2p * std::exp(log_scale);
}

Evaluation eval_with_derivatives(std::span<const double> coeffs, double t, int order) {
  check_order(order);
  if (!std::isfinite(t)) throw std::invalid_argument("evaluation point must be finite");
  if (coeffs.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
  Evaluation e;
  if (std::abs(t) <= 1.0) {
    const Horner3 h = horner(coeffs, t);
    e.p = h.p;
    e.dp = order >= 1 ? h.d1 : 0.0;
    e.d2p = order >= 2 ? 2.0 * h.half_d2 : 0.0;
    return e;
  }
  // p(t) = t^n q(1/t) with q the reversed sequence; |t|^n kept in log form.
  const double n = static_cast<double>(coeffs.size() - 1);
  const double x = 1.0 / t;
  const Horner3 q = horner_reversed(coeffs, x);
  const double q2 = 2.0 * q.half_d2;
  const bool odd_negative = t < 0.0 && (coeffs.size() - 1) % 2 == 1;
  const double sign = odd_negative ? -1.0 : 1.0;
  e.log_scale = n * std::log(std::abs(t));
  e.p = sign * q.p;
  if (order >= 1) e.dp = sign * (n * x * q.p - x * x * q.d1);
  if (order >= 2) {
    e.d2p = sign * (n * (n - 1.0) * x * x * q.p - 2.0 * (n - 1.0) * x * x * x * q.d1 +
                    x * x * x * x * q2);
  }
  return e;
}

Evaluation eval_with_derivatives(const PolynomialSample& s, double t, int order) {
  return eval_with_derivatives(std::span<const double>(s.coeffs), t, order);
}

PolynomialSample reciprocal_transform(const PolynomialSample& s) {
  PolynomialSample r = s;
  std::reverse(r.coeffs.begin(), r.coeffs.end());
  r.profile_id = s.profile_id + "/reciprocal";
  return r;
}

double ScaledMoments::S() const { return P * Q - R * R; }

ScaledMoments scaled_moments(const CoefficientProfile& prof, double t) {
  if (!(std::abs(t) <= 1.0)) {
    throw std::invalid_argument("scaled_moments needs |t| <= 1; use the reciprocal profile beyond");
  }
  const auto& b = prof.means();
  const auto& c = prof.sigmas();
  double top = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) top = std::max({top, std::abs(b[j]), std::abs(c[j])});
  ScaledMoments s;
  if (top == 0.0) return s;
  const double inv = 1.0 / top;
  s.log_sigma = std::log(top);

  // pw2 = t^(j-2), pw1 = t^(j-1), pw0 = t^j
  double pw0 = 1.0, pw1 = 0.0, pw2 = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double jd = static_cast<double>(j);
    const double e1 = jd * pw1;
    const double e2 = jd * (jd - 1.0) * pw2;
    const double cc = c[j] * inv;
    const double bb = b[j] * inv;
    const double g0 = cc * pw0, g1 = cc * e1, g2 = cc * e2;
    s.P += g0 * g0;
    s.Q += g1 * g1;
    s.R += g0 * g1;
    s.V2 += g2 * g2;
    s.m0 += bb * pw0;
    s.m1 += bb * e1;
    s.m2 += bb * e2;
    pw2 = pw1;
    pw1 = pw0;
    pw0 *= t;
    // Once t^j is this small the rest of every sum is below the rounding of
    // what has been accumulated; stopping also keeps the loop out of
    // subnormal arithmetic.
    if (j >= 2 && std::abs(pw2) < kTailCutoff && s.P > kTailFloor) break;
  }
  if (s.P < kUnderflowGuard && t != 0.0) {
    ScaledMoments l = moments_log_domain(b, c, t);
    if (l.P > s.P) return l;
  }
  return s;
}

double mean_derivatives(const CoefficientProfile& p, double t, int k, bool reciprocal) {
  check_order(k);
  const auto& b = p.means();
  const Horner3 h = reciprocal ? horner_reversed(b, t) : horner(b, t);
  if (k == 0) return h.p;
  if (k == 1) return h.d1;
  return 2.0 * h.half_d2;
}

double variance_derivatives(const CoefficientProfile& p, double t, int k, bool reciprocal) {
  check_order(k);
  const CoefficientProfile& prof = p;
  if (std::abs(t) <= 1.0) {
    const ScaledMoments s = reciprocal ? scaled_moments(prof.reciprocal(), t) : scaled_moments(prof, t);
    const double v = k == 0 ? s.P : (k == 1 ? s.Q : s.V2);
    return v * std::exp(2.0 * s.log_sigma);
  }
  const auto& c = p.sigmas();
  const std::size_t n = c.size() - 1;
  double sum = 0.0;
  for (std::size_t j = static_cast<std::size_t>(k); j <= n; ++j) {
    const double cj = reciprocal ? c[n - j] : c[j];
    const double w = cj * falling(j, k) * std::pow(t, static_cast<double>(j) - k);
    sum += w * w;
  }
  return sum;
}

VarianceBundle pqrs(const CoefficientProfile& p, double t) {
  VarianceBundle v;
  if (std::abs(t) <= 1.0) {
    const ScaledMoments s = scaled_moments(p, t);
    const double f = std::exp(2.0 * s.log_sigma);
    v.P = s.P * f;
    v.Q = s.Q * f;
    v.R = s.R * f;
    v.S_unclamped = s.S() * f * f;
  } else {
    const auto& c = p.sigmas();
    double pw = 1.0, pw1 = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double jd = static_cast<double>(j);
      const double g0 = c[j] * pw, g1 = c[j] * jd * pw1;
      v.P += g0 * g0;
      v.Q += g1 * g1;
      v.R += g0 * g1;
      pw1 = pw;
      pw *= t;
    }
    v.S_unclamped = v.P * v.Q - v.R * v.R;
  }
  v.S = std::max(0.0, v.S_unclamped);
  return v;
}

PowerSum power_sum(std::size_t n, double alpha, double beta, double t) {
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    throw std::invalid_argument("power_sum requires alpha > -1 and beta > -1");
  }
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("power_sum requires t > 0");
  if (n == 0) return {0.0, 0.0};
  const double nd = static_cast<double>(n);
  const double lt = std::log(t);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= n; ++j) {
    const double jd = static_cast<double>(j);
    top = std::max(top, beta * std::log(nd + 1.0 - jd) + alpha * std::log(jd) + jd * lt);
  }
  double acc = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double jd = static_cast<double>(j);
    acc += std::exp(beta * std::log(nd + 1.0 - jd) + alpha * std::log(jd) + jd * lt - top);
  }
  PowerSum out;
  out.exact = acc * std::exp(top);
  if (std::abs(1.0 - t) <= kPowerSumBranch / nd) {
    out.asymptotic = std::pow(nd, alpha + beta + 1.0);
  } else if (t <= 1.0 - kPowerSumBranch / nd) {
    out.asymptotic = std::pow(nd, beta) * std::pow(1.0 - t, -alpha - 1.0);
  } else {
    out.asymptotic = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

LocalAnnulus interval_Idelta(double delta, std::size_t n) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (n < 1) throw std::invalid_argument("degree must be at least 1");
  const double nd = static_cast<double>(n);
  LocalAnnulus a{delta, n, 0.0, 0.0};
  if (delta >= 1.0 / (10.0 * nd)) {
    a.inner = 1.0 - 2.0 * delta;
    a.outer = 1.0 - delta;
  } else {
    a.inner = 1.0 - 1.0 / (2.0 * nd);
    a.outer = 1.0 + 1.0 / (2.0 * nd);
  }
  return a;
}

Interval enlargement(const Interval& iv, std::size_t n, double factor) {
  if (iv.empty()) throw std::invalid_argument("cannot enlarge an empty interval");
  const double inv_n = 1.0 / static_cast<double>(std::max<std::size_t>(n, 1));
  Interval out = iv;
  if (std::isfinite(iv.lo)) out.lo = iv.lo - factor * (std::abs(1.0 - std::abs(iv.lo)) + inv_n);
  if (std::isfinite(iv.hi)) out.hi = iv.hi + factor * (std::abs(1.0 - std::abs(iv.hi)) + inv_n);
  return out;
}

}  // namespace randpoly
