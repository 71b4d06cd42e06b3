#include "randpoly/rootcount.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace randpoly {

std::vector<Interval> reciprocal_image(const Interval& iv) {
  std::vector<Interval> out;
  if (auto pos = intersect(iv, Interval::open(1.0, kInfinity))) {
    Interval im;
    im.lo = std::isinf(pos->hi) ? 0.0 : 1.0 / pos->hi;
    im.lo_closed = std::isinf(pos->hi) ? false : pos->hi_closed;
    im.hi = 1.0 / pos->lo;
    im.hi_closed = pos->lo_closed;
    if (!im.empty()) out.push_back(im);
  }
  if (auto neg = intersect(iv, Interval::open(-kInfinity, -1.0))) {
    Interval im;
    im.lo = 1.0 / neg->hi;
    im.lo_closed = neg->hi_closed;
    im.hi = std::isinf(neg->lo) ? 0.0 : 1.0 / neg->lo;
    im.hi_closed = std::isinf(neg->lo) ? false : neg->lo_closed;
    if (!im.empty()) out.push_back(im);
  }
  return out;
}

double global_root_bound(std::span<const double> coeffs) {
  std::size_t n = coeffs.size();
  while (n > 0 && coeffs[n - 1] == 0.0) --n;
  if (n == 0) throw std::invalid_argument("root bound of the identically zero polynomial");
  const double lead = std::abs(coeffs[n - 1]);
  double m = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) m = std::max(m, std::abs(coeffs[j]) / lead);
  return 1.0 + m;
}

double global_root_bound(const PolynomialSample& s) {
  return global_root_bound(std::span<const double>(s.coeffs));
}

RootCountResult count_companion(std::span<const double> coeffs, const Interval& iv) {
  std::size_t k0 = 0;
  while (k0 < coeffs.size() && coeffs[k0] == 0.0) ++k0;
  if (k0 == coeffs.size()) {
    throw std::invalid_argument("cannot count roots of the identically zero polynomial");
  }
  std::size_t kn = coeffs.size() - 1;
  while (coeffs[kn] == 0.0) --kn;

  RootCountResult res;
  res.method = CountMethod::companion;
  res.certified = false;
  std::vector<double> roots;
  if (k0 > 0) roots.push_back(0.0);

  const std::size_t d = kn - k0;
  if (d > 0) {
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                                 static_cast<Eigen::Index>(d));
    const double lead = coeffs[kn];
    for (std::size_t i = 0; i < d; ++i) {
      comp(0, static_cast<Eigen::Index>(i)) = -coeffs[kn - 1 - i] / lead;
      if (i + 1 < d) comp(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("companion eigenvalue solve failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const std::complex<double> z = es.eigenvalues()[i];
      if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z))) roots.push_back(z.real());
    }
  }
  std::sort(roots.begin(), roots.end());
  double last = 0.0;
  bool have_last = false;
  for (double x : roots) {
    if (have_last && std::abs(x - last) <= 1e-8 * (1.0 + std::abs(x))) continue;
    last = x;
    have_last = true;
    if (iv.contains(x)) ++res.count;
  }
  return res;
}

}  // namespace randpoly
