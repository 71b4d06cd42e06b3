#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "randpoly/ensembles.hpp"
#include "randpoly/interval.hpp"

namespace randpoly {

enum class CountMethod { bisection_certified, sturm_exact, companion };

std::string_view to_string(CountMethod m);

/// Number of distinct real roots in an interval.
///
/// Roots are counted without multiplicity. When certification fails on some
/// subintervals those pieces contribute nothing to `count`, are listed in
/// `unresolved`, and `certified` is false.
struct RootCountResult {
  std::size_t count = 0;
  CountMethod method = CountMethod::bisection_certified;
  bool certified = true;
  std::vector<Interval> unresolved;
};

/// Bisection with derivative-bound certificates (see certified_counter.cpp).
///
/// Bounded intervals reaching past +-1 are rescaled by a power of two so the
/// endpoints stay exact; unbounded ones go through count_split_reciprocal.
RootCountResult count_certified(std::span<const double> coeffs, const Interval& iv);
RootCountResult count_certified(const PolynomialSample& s, const Interval& iv);

/// Counts [-1, 1] on p and the part beyond +-1 on the reversed polynomial
/// over the image interval under t -> 1/t. Works for any interval,
/// including the whole line.
RootCountResult count_split_reciprocal(std::span<const double> coeffs, const Interval& iv);
RootCountResult count_split_reciprocal(const PolynomialSample& s, const Interval& iv);

/// Image of iv minus [-1, 1] under t -> 1/t, as up to two intervals inside
/// (-1, 1). Endpoint closures are carried across; 1/(+-inf) is an open 0.
std::vector<Interval> reciprocal_image(const Interval& iv);

/// Cauchy bound 1 + max_{j<n} |a_j / a_n| after dropping vanishing leading
/// coefficients; every real root lies in (-B, B).
double global_root_bound(std::span<const double> coeffs);
double global_root_bound(const PolynomialSample& s);

/// Real eigenvalues of the companion matrix that fall in iv, merged when
/// they agree to 1e-8. An uncertified cross-check only.
RootCountResult count_companion(std::span<const double> coeffs, const Interval& iv);

/// Reusable buffers for counting many polynomials of similar degree in a loop.
/// One instance per thread.
class RootCounter {
 public:
  RootCountResult count(std::span<const double> coeffs, const Interval& iv);
  RootCountResult count_split(std::span<const double> coeffs, const Interval& iv);

  /// Number of certificate probes performed since construction.
  std::size_t probes() const { return probes_; }

  struct Item {
    double u, v;
    signed char su, sv;  // sign of q at the endpoint; 2 = not yet known
    int mu, mv;          // index into the mesh sign cache, -1 if none
    int depth;
  };

 private:
  struct Core {
    std::size_t count = 0;
    bool certified = true;
  };

  RootCountResult count_impl(std::span<const double> coeffs, const Interval& iv, bool force_split);
  Core count_unit(std::span<const double> q, double lo, bool lo_closed, double hi, bool hi_closed,
                  std::vector<Interval>& unresolved, double scale, bool reciprocal);
  int endpoint_sign(std::span<const double> q, Item& it, bool left);

  std::vector<double> stripped_;
  std::vector<double> work_;
  std::vector<double> abs_;
  std::vector<double> mesh_;
  std::vector<signed char> mesh_sign_;
  std::vector<Item> stack_;
  std::size_t probes_ = 0;
  std::size_t mesh_roots_ = 0;
};

/// Exact count of distinct real roots by a Sturm chain over the integers.
/// Coefficients are ascending; the interval endpoints are rationals with
/// closure flags (default [lo, hi)). Degree above kSturmMaxDegree throws.
inline constexpr std::size_t kSturmMaxDegree = 512;

/// The square-free Sturm chain of one polynomial, built once and queried on
/// many intervals.
class SturmChain {
 public:
  explicit SturmChain(std::span<const mpq_class> coeffs);
  explicit SturmChain(std::span<const double> coeffs);

  std::size_t count(const mpq_class& lo, const mpq_class& hi, bool lo_closed = true,
                    bool hi_closed = false) const;
  /// Infinite endpoints allowed.
  std::size_t count(const Interval& iv) const;

 private:
  void build(std::vector<mpz_class> f);
  std::vector<std::vector<mpz_class>> chain_;
};

std::size_t sturm_exact(std::span<const mpq_class> coeffs, const mpq_class& lo,
                        const mpq_class& hi, bool lo_closed = true, bool hi_closed = false);

/// Double coefficients and endpoints are converted exactly; infinite
/// endpoints are allowed.
std::size_t sturm_exact(std::span<const double> coeffs, const Interval& iv);

/// Exact sign of sum a_j x^j for double inputs.
int exact_sign(std::span<const double> coeffs, double x);

}  // namespace randpoly
