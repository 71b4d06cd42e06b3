#include "randpoly/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string_view>

namespace randpoly {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string("profile ") + what + " contains a non-finite entry");
    }
  }
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

// (j + k)! / j! as a product for modest k, through lgamma beyond.
double falling_factorial(std::size_t j, std::size_t k) {
  if (k <= 32) {
    double f = 1.0;
    for (std::size_t i = 1; i <= k; ++i) f *= static_cast<double>(j + i);
    return f;
  }
  return std::exp(std::lgamma(static_cast<double>(j + k + 1)) -
                  std::lgamma(static_cast<double>(j + 1)));
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t count = 0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit fit;
  fit.count = x.size();
  if (x.size() < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace

CoefficientProfile::CoefficientProfile(Unchecked, std::vector<double> b, std::vector<double> c,
                                       double rho, std::string tag)
    : b_(std::move(b)), c_(std::move(c)), rho_(rho), tag_(std::move(tag)) {
  if (b_.empty() || b_.size() != c_.size()) {
    throw std::invalid_argument("profile needs b and c of equal length n + 1 >= 1");
  }
  require_finite(b_, "means");
  require_finite(c_, "sigmas");
  if (!std::isfinite(rho_)) throw std::invalid_argument("profile rho must be finite");
}

CoefficientProfile::CoefficientProfile(std::vector<double> b, std::vector<double> c, double rho,
                                       std::string family_tag)
    : CoefficientProfile(Unchecked{}, std::move(b), std::move(c), rho, std::move(family_tag)) {
  if (all_zero(c_)) {
    throw std::invalid_argument("profile sigmas are identically zero: not a random polynomial");
  }
}

CoefficientProfile CoefficientProfile::degenerate(std::vector<double> b, std::vector<double> c,
                                                  double rho, std::string family_tag) {
  return CoefficientProfile(Unchecked{}, std::move(b), std::move(c), rho, std::move(family_tag));
}

bool CoefficientProfile::centered() const { return all_zero(b_); }
bool CoefficientProfile::random() const { return !all_zero(c_); }

CoefficientProfile CoefficientProfile::centered_copy() const {
  return CoefficientProfile(Unchecked{}, std::vector<double>(b_.size(), 0.0), c_, rho_,
                            tag_ + "/centered");
}

CoefficientProfile CoefficientProfile::reciprocal() const {
  // Reversal is an involution; keep the tag one too.
  static constexpr std::string_view kSuffix = "/reciprocal";
  std::string tag = tag_;
  if (tag.size() >= kSuffix.size() && tag.compare(tag.size() - kSuffix.size(), kSuffix.size(), kSuffix) == 0) {
    tag.resize(tag.size() - kSuffix.size());
  } else {
    tag += kSuffix;
  }
  return CoefficientProfile(Unchecked{}, std::vector<double>(b_.rbegin(), b_.rend()),
                            std::vector<double>(c_.rbegin(), c_.rend()), rho_, std::move(tag));
}

CoefficientProfile CoefficientProfile::scaled(double lambda) const {
  auto b = b_;
  auto c = c_;
  for (auto& x : b) x *= lambda;
  for (auto& x : c) x *= lambda;
  return CoefficientProfile(Unchecked{}, std::move(b), std::move(c), rho_, tag_);
}

std::string CoefficientProfile::id() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(tag_.data(), tag_.size(), h);
  h = fnv1a(b_.data(), b_.size() * sizeof(double), h);
  h = fnv1a(c_.data(), c_.size() * sizeof(double), h);
  h = fnv1a(&rho_, sizeof rho_, h);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return tag_ + "#" + std::string(buf, 12);
}

bool PolynomialSample::identically_zero() const { return all_zero(coeffs); }

PolynomialSample PolynomialSample::from_coeffs(std::vector<double> coeffs, std::string id) {
  if (coeffs.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
  require_finite(coeffs, "coefficients");
  PolynomialSample s;
  s.coeffs = std::move(coeffs);
  s.profile_id = std::move(id);
  return s;
}

double log_hyperbolic_weight(double L, std::size_t j) {
  if (!(L > 0.0)) throw std::invalid_argument("hyperbolic parameter L must be positive");
  const double jd = static_cast<double>(j);
  return std::lgamma(L + jd) - std::lgamma(L) - std::lgamma(jd + 1.0);
}

double hyperbolic_weight(double L, std::size_t j) { return std::exp(log_hyperbolic_weight(L, j)); }

CoefficientProfile hyperbolic_profile(double L, std::size_t n, double mu) {
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw std::invalid_argument("hyperbolic parameter L must be positive and finite");
  }
  std::vector<double> c(n + 1), b(n + 1);
  // log h_L(j+1) - log h_L(j) = log1p((L - 1) / (j + 1)); the running sum is
  // compensated so consecutive ratios keep full precision at large j.
  double log_h = 0.0, carry = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    if (j > 0) {
      const double inc = std::log1p((L - 1.0) / static_cast<double>(j));
      const double t = log_h + inc;
      carry += std::abs(log_h) >= std::abs(inc) ? (log_h - t) + inc : (inc - t) + log_h;
      log_h = t;
    }
    c[j] = std::exp(0.5 * (log_h + carry));
    b[j] = mu * c[j];
  }
  char tag[64];
  std::snprintf(tag, sizeof tag, "hyperbolic(L=%g,mu=%g)", L, mu);
  return CoefficientProfile(std::move(b), std::move(c), 0.5 * (L - 1.0), tag);
}

CoefficientProfile power_profile(std::size_t n, double rho, double mu_scale, double rho_mean) {
  if (!(rho > -0.5)) {
    throw std::invalid_argument(
        "power profile requires rho > -1/2 (growth condition b_j, c_j = O((1+j)^rho), "
        "|c_j| >~ (1+j)^rho with rho > -1/2)");
  }
  std::vector<double> c(n + 1), b(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double base = 1.0 + static_cast<double>(j);
    c[j] = std::pow(base, rho);
    b[j] = mu_scale == 0.0 ? 0.0 : mu_scale * std::pow(base, rho_mean);
  }
  char tag[96];
  std::snprintf(tag, sizeof tag, "power(rho=%g,mu=%g,rho_mean=%g)", rho, mu_scale, rho_mean);
  return CoefficientProfile(std::move(b), std::move(c), rho, tag);
}

CoefficientProfile mixed_sign_profile(std::size_t n, double rho, double rho_prime,
                                      double rho_dprime) {
  if (!(rho > -0.5)) throw std::invalid_argument("mixed-sign profile requires rho > -1/2");
  if (!(rho - 0.5 < rho_prime && rho_prime <= rho)) {
    throw std::invalid_argument("mixed-sign profile requires rho - 1/2 < rho_prime <= rho");
  }
  if (!(rho_dprime < rho_prime)) {
    throw std::invalid_argument("mixed-sign profile requires rho_dprime < rho_prime");
  }
  std::vector<double> c(n + 1), b(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double base = 1.0 + static_cast<double>(j);
    c[j] = std::pow(base, rho);
    b[j] = std::pow(base, j % 2 == 0 ? rho_prime : rho_dprime);
  }
  char tag[96];
  std::snprintf(tag, sizeof tag, "mixed-sign(rho=%g,rho'=%g,rho''=%g)", rho, rho_prime,
                rho_dprime);
  return CoefficientProfile(std::move(b), std::move(c), rho, tag);
}

CoefficientProfile derivative_profile(const CoefficientProfile& p, std::size_t k) {
  if (k > p.degree()) {
    throw std::invalid_argument("derivative order exceeds the profile degree");
  }
  if (k == 0) return p;
  const std::size_t m = p.degree() - k;
  std::vector<double> b(m + 1), c(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    const double f = falling_factorial(j, k);
    b[j] = p.mean(j + k) * f;
    c[j] = p.sigma(j + k) * f;
  }
  const std::string tag = "d" + std::to_string(k) + ":" + p.family_tag();
  if (all_zero(c)) return CoefficientProfile::degenerate(std::move(b), std::move(c), p.rho() + k, tag);
  return CoefficientProfile(std::move(b), std::move(c), p.rho() + static_cast<double>(k), tag);
}

double generalized_coefficient(std::span<const GeneralizedTerm> terms, std::size_t j) {
  if (terms.empty()) throw std::invalid_argument("generalized polynomial needs at least one term");
  double sum = 0.0;
  for (const auto& term : terms) {
    if (!(term.L > 0.0)) throw std::invalid_argument("hyperbolic parameter L must be positive");
    double h = 1.0;
    if (j <= 64) {
      // Ratio product; exact for small integer L.
      for (std::size_t i = 0; i < j; ++i) {
        h *= (term.L + static_cast<double>(i)) / static_cast<double>(i + 1);
      }
    } else {
      h = hyperbolic_weight(term.L, j);
    }
    sum += term.weight * h;
  }
  return sum;
}

double generalized_degree(std::span<const GeneralizedTerm> terms) {
  if (terms.empty()) throw std::invalid_argument("generalized polynomial needs at least one term");
  double lmax = terms.front().L;
  for (const auto& t : terms) lmax = std::max(lmax, t.L);
  return lmax - 1.0;
}

ConditionReport validate_condition(const CoefficientProfile& p, std::size_t j0) {
  const std::size_t n = p.degree();
  if (n < 2 * j0 + 2) {
    throw std::invalid_argument("validate_condition needs n >= 2*j0 + 2");
  }
  ConditionReport report;
  const double rho = p.rho();

  std::vector<double> x, y;
  for (std::size_t j = j0; j <= n - j0; ++j) {
    const double cj = std::abs(p.sigma(j));
    if (cj == 0.0 || !std::isfinite(cj)) {
      report.violation_indices.push_back(j);
      continue;
    }
    x.push_back(std::log1p(static_cast<double>(j)));
    y.push_back(std::log(cj));
  }
  if (x.size() < 2) {
    report.passes = false;
    return report;
  }
  report.fitted_rho = least_squares(x, y).slope;

  double upper = 0.0;
  double lower = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= n; ++j) {
    const double scale = std::pow(1.0 + static_cast<double>(j), rho);
    const double ratio = std::abs(p.sigma(j)) / scale;
    upper = std::max(upper, ratio);
    if (j >= j0 && j <= n - j0) lower = std::min(lower, ratio);
  }
  report.upper_constant = upper;
  report.lower_constant = lower;

  std::vector<double> bx, by;
  double mean_constant = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double bj = std::abs(p.mean(j));
    mean_constant = std::max(mean_constant, bj / std::pow(1.0 + static_cast<double>(j), rho));
    if (j >= j0 && j <= n - j0 && bj > 0.0) {
      bx.push_back(std::log1p(static_cast<double>(j)));
      by.push_back(std::log(bj));
    }
  }
  report.mean_constant = mean_constant;
  report.mean_exponent = bx.size() >= 2 ? least_squares(bx, by).slope : -std::numeric_limits<double>::infinity();

  const bool slope_ok = std::abs(report.fitted_rho - rho) <= kConditionSlopeTolerance;
  const bool constants_ok = std::isfinite(upper) && lower > 0.0 && std::isfinite(lower);
  const bool mean_ok = std::isfinite(mean_constant) &&
                       (bx.size() < 2 || report.mean_exponent <= rho + kConditionSlopeTolerance);
  report.passes = slope_ok && constants_ok && mean_ok && rho > -0.5;
  return report;
}

bool sample_into(const CoefficientProfile& p, const NoiseSpec& noise, std::uint64_t seed,
                 std::uint64_t trial, std::vector<double>& out) {
  const std::size_t size = p.degree() + 1;
  out.resize(size);
  bool nonzero = false;
  const auto& b = p.means();
  const auto& c = p.sigmas();
  for (std::size_t j = 0; j < size; ++j) {
    const double a = c[j] == 0.0 ? b[j] : b[j] + c[j] * noise.innovation(seed, trial, j);
    out[j] = a;
    nonzero = nonzero || a != 0.0;
  }
  return nonzero;
}

PolynomialSample sample(const CoefficientProfile& p, const NoiseSpec& noise, std::uint64_t seed,
                        std::uint64_t trial) {
  PolynomialSample s;
  s.seed = seed;
  s.trial = trial;
  s.profile_id = p.id();
  if (!sample_into(p, noise, seed, trial, s.coeffs)) {
    throw ZeroSampleError("sampled polynomial is identically zero (seed " + std::to_string(seed) +
                          ", trial " + std::to_string(trial) + "); resample with another trial");
  }
  return s;
}

}  // namespace randpoly
