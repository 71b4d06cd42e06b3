#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "randpoly/noise.hpp"

namespace randpoly {

/// Deterministic data of a coefficient ensemble: a_j = b_j + c_j xi_j.
///
/// b holds the means and c the signed standard deviations, both of length
/// n + 1 (index j is the coefficient of t^j). rho is the declared growth
/// exponent. Profiles are immutable once built.
class CoefficientProfile {
 public:
  /// Validating constructor. Rejects mismatched lengths, empty sequences,
  /// non-finite entries, and c identically zero.
  CoefficientProfile(std::vector<double> b, std::vector<double> c, double rho,
                     std::string family_tag = "custom");

  /// A profile whose c may vanish identically. Used for deterministic
  /// samples; analytic routines reject it.
  static CoefficientProfile degenerate(std::vector<double> b, std::vector<double> c,
                                       double rho = 0.0, std::string family_tag = "degenerate");

  std::size_t degree() const { return b_.size() - 1; }
  const std::vector<double>& means() const { return b_; }
  const std::vector<double>& sigmas() const { return c_; }
  double mean(std::size_t j) const { return b_[j]; }
  double sigma(std::size_t j) const { return c_[j]; }
  double rho() const { return rho_; }
  const std::string& family_tag() const { return tag_; }

  /// rho > -1/2, the growth restriction under which the log n laws hold.
  bool claims_growth_condition() const { return rho_ > -0.5; }
  bool centered() const;
  bool random() const;

  /// Same c, b set to zero (the noise part r_n).
  CoefficientProfile centered_copy() const;
  /// Profile of the reciprocal polynomial t^n p(1/t): both sequences reversed.
  CoefficientProfile reciprocal() const;
  /// Joint scaling of b and c by lambda.
  CoefficientProfile scaled(double lambda) const;

  /// Stable short identifier derived from the tag and a content hash.
  std::string id() const;

  friend bool operator==(const CoefficientProfile&, const CoefficientProfile&) = default;

 private:
  struct Unchecked {};
  CoefficientProfile(Unchecked, std::vector<double> b, std::vector<double> c, double rho,
                     std::string tag);

  std::vector<double> b_;
  std::vector<double> c_;
  double rho_;
  std::string tag_;
};

/// One realized coefficient vector with its stream provenance.
struct PolynomialSample {
  std::vector<double> coeffs;
  std::string profile_id;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  bool identically_zero() const;

  /// Sample built from explicit coefficients (tests, CLI input).
  static PolynomialSample from_coeffs(std::vector<double> coeffs, std::string id = "explicit");
};

/// Thrown when a discrete-noise draw produces the zero polynomial.
class ZeroSampleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// log h_L(j) = log(L (L+1) ... (L+j-1) / j!), evaluated through lgamma.
double log_hyperbolic_weight(double L, std::size_t j);
/// h_L(j) itself.
double hyperbolic_weight(double L, std::size_t j);

/// c_j = sqrt(h_L(j)), b_j = mu c_j, rho = (L - 1) / 2.
CoefficientProfile hyperbolic_profile(double L, std::size_t n, double mu);

/// c_j = (1 + j)^rho, b_j = mu_scale (1 + j)^rho_mean.
CoefficientProfile power_profile(std::size_t n, double rho, double mu_scale = 0.0,
                                 double rho_mean = 0.0);

/// c_j = (1 + j)^rho; b_j = (1 + j)^rho_prime for even j and
/// (1 + j)^rho_dprime for odd j. Requires rho - 1/2 < rho_prime <= rho and
/// rho_dprime < rho_prime.
CoefficientProfile mixed_sign_profile(std::size_t n, double rho, double rho_prime,
                                      double rho_dprime);

/// Profile of the k-th derivative: degree n - k, entries scaled by the
/// falling factorial (j + k)! / j!, rho raised by k.
CoefficientProfile derivative_profile(const CoefficientProfile& p, std::size_t k);

/// Finite combination sum_i w_i h_{L_i}(j) of hyperbolic weights.
struct GeneralizedTerm {
  double weight;
  double L;
};
double generalized_coefficient(std::span<const GeneralizedTerm> terms, std::size_t j);
/// Degree L_max - 1 of a generalized polynomial.
double generalized_degree(std::span<const GeneralizedTerm> terms);

struct ConditionReport {
  bool passes = false;
  double fitted_rho = 0.0;
  double upper_constant = 0.0;
  double lower_constant = 0.0;
  double mean_exponent = 0.0;
  double mean_constant = 0.0;
  std::vector<std::size_t> violation_indices;
};

inline constexpr double kConditionSlopeTolerance = 0.05;
inline constexpr std::size_t kConditionWindowOffset = 8;

/// Log-log least squares of |c_j| against (1 + j) over j in [j0, n - j0],
/// checked against the declared rho, plus the matching growth bound on b.
ConditionReport validate_condition(const CoefficientProfile& p,
                                   std::size_t j0 = kConditionWindowOffset);

/// a_j = b_j + c_j xi_j with xi_j from the stream (seed, trial, j).
/// Deterministic in its inputs. Throws ZeroSampleError for the zero vector.
PolynomialSample sample(const CoefficientProfile& p, const NoiseSpec& noise, std::uint64_t seed,
                        std::uint64_t trial);

/// Allocation-free variant for the Monte Carlo loop; returns false instead
/// of throwing when the draw is identically zero.
bool sample_into(const CoefficientProfile& p, const NoiseSpec& noise, std::uint64_t seed,
                 std::uint64_t trial, std::vector<double>& out);

}  // namespace randpoly
