// Certified real-root counting by bisection.
//
// Every piece of work is a polynomial q on a subinterval of [-1, 1]; the
// caller maps the original problem there either by a power-of-two rescaling
// (exact endpoints) or through the reversed polynomial for |t| > 1.
//
// On [u, v] with midpoint c and half-width h one pass over the coefficients
// yields q(c), q'(c), q''(c)/2 together with the same chain for the
// absolute-value polynomial A(x) = sum |a_j| x^j at r = max(|u|, |v|).
// A bounds both the Horner rounding error (gamma * A^{(k)}) and the third
// derivative of q on the whole subinterval, so the Taylor remainders are
// rigorous:
//   root free  if |q(c)| > h|q'(c)| + h^2 |q''(c)|/2 + h^3 A'''(r)/6
//   monotone   if |q'(c)| > h|q''(c)| + h^2 A'''(r)/2
// (each side padded by the rounding bounds). A monotone piece holds a root
// in its interior iff the endpoint signs differ strictly. Endpoint signs
// that the floating bound cannot settle are decided by exact rational
// evaluation, so a root sitting exactly on a split point is found and
// counted once. Next to such a root of multiplicity m >= 2 both tests
// degenerate (q' vanishes there too), so deep pieces touching one drop a
// root-free zone around it, certified from the exact Taylor expansion.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "randpoly/rootcount.hpp"

namespace randpoly {

namespace {

constexpr double kUnitRoundoff = 0x1.0p-53;
constexpr double kSlack = 1.0 + 1e-9;
constexpr int kMaxDepth = 60;
constexpr std::size_t kMaxProbes = std::size_t{1} << 20;
constexpr double kMeshStart = 0.7;
constexpr double kMeshRatio = 1.5;
constexpr int kRootZoneDepth = 24;

struct Probe {
  double q0 = 0, q1 = 0, q2 = 0;          // q, q', q''/2 at c
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;  // A, A', A''/2, A'''/6 at r
};

Probe probe(const double* a, const double* aa, std::size_t len, double c, double r) {
  Probe p;
  for (std::size_t i = len; i-- > 0;) {
    p.q2 = p.q2 * c + p.q1;
    p.q1 = p.q1 * c + p.q0;
    p.q0 = p.q0 * c + a[i];
    p.a3 = p.a3 * r + p.a2;
    p.a2 = p.a2 * r + p.a1;
    p.a1 = p.a1 * r + p.a0;
    p.a0 = p.a0 * r + aa[i];
  }
  return p;
}

int sign_of(double x) { return (x > 0) - (x < 0); }

// Smallest k with 2^k >= m, for m > 1.
int ceil_log2(double m) {
  int e = 0;
  const double frac = std::frexp(m, &e);  // m = frac * 2^e, frac in [0.5, 1)
  return frac == 0.5 ? e - 1 : e;
}

// For an exact root u of q: the largest power of two w <= max_w with no
// other root in 0 < |x - u| <= w. With q(u + x) = sum c_k x^k and c_m the
// first nonzero coefficient, |c_m| > sum_{k>m} |c_k| w^{k-m} keeps
// q(u + x) = x^m (c_m + ...) away from zero on both sides.
std::optional<double> root_free_width(std::span<const double> q, double u, double max_w) {
  const std::size_t d = q.size() - 1;
  std::vector<mpq_class> c(q.begin(), q.end());
  const mpq_class U(u);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = d; j-- > i;) c[j] += U * c[j + 1];
  }
  std::size_t m = 0;
  while (m <= d && c[m] == 0) ++m;
  if (m == 0 || m > d) return std::nullopt;
  const mpq_class lead = abs(c[m]);

  int e = 0;
  std::frexp(max_w, &e);  // 2^(e-1) <= max_w
  for (int j = e - 1; j > -1000; --j) {
    mpq_class w(1);
    if (j >= 0) {
      mpq_mul_2exp(w.get_mpq_t(), w.get_mpq_t(), static_cast<unsigned long>(j));
    } else {
      mpq_div_2exp(w.get_mpq_t(), w.get_mpq_t(), static_cast<unsigned long>(-j));
    }
    mpq_class rest(0), pw = w;
    for (std::size_t k = m + 1; k <= d; ++k) {
      rest += abs(c[k]) * pw;
      pw *= w;
    }
    if (lead > rest) return std::ldexp(1.0, j);
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(CountMethod m) {
  switch (m) {
    case CountMethod::bisection_certified: return "bisection-certified";
    case CountMethod::sturm_exact: return "sturm-exact";
    case CountMethod::companion: return "companion";
  }
  return "unknown";
}

int RootCounter::endpoint_sign(std::span<const double> q, Item& it, bool left) {
  signed char& s = left ? it.su : it.sv;
  if (s != 2) return s;
  const int idx = left ? it.mu : it.mv;
  if (idx >= 0 && mesh_sign_[static_cast<std::size_t>(idx)] != 2) {
    s = mesh_sign_[static_cast<std::size_t>(idx)];
    return s;
  }
  const double x = left ? it.u : it.v;
  double val = 0.0, bound = 0.0;
  const double ax = std::abs(x);
  for (std::size_t i = q.size(); i-- > 0;) {
    val = val * x + q[i];
    bound = bound * ax + abs_[i];
  }
  const double gamma = 2.0 * (4.0 * static_cast<double>(q.size()) + 8.0) * kUnitRoundoff;
  int sg = std::abs(val) > gamma * bound * kSlack ? sign_of(val) : exact_sign(q, x);
  s = static_cast<signed char>(sg);
  if (idx >= 0) {
    mesh_sign_[static_cast<std::size_t>(idx)] = s;
    // An exact root on an interior mesh point is counted once, here.
    if (sg == 0) ++mesh_roots_;
  }
  return sg;
}

RootCounter::Core RootCounter::count_unit(std::span<const double> q, double lo, bool lo_closed,
                                          double hi, bool hi_closed,
                                          std::vector<Interval>& unresolved, double scale,
                                          bool reciprocal) {
  Core out;
  if (lo > hi || (lo == hi && !(lo_closed && hi_closed))) return out;
  const std::size_t d = q.size() - 1;
  if (d == 0) return out;

  abs_.resize(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) abs_[i] = std::abs(q[i]);
  const double gamma = 2.0 * (4.0 * static_cast<double>(q.size()) + 8.0) * kUnitRoundoff;

  // Neighbouring leaves come off the stack in order; merge them.
  auto report = [&](double u, double v) {
    out.certified = false;
    const Interval leaf = reciprocal ? Interval::closed(1.0 / v, 1.0 / u)
                                     : Interval::closed(u * scale, v * scale);
    if (!unresolved.empty() && unresolved.back().hi == leaf.lo) {
      unresolved.back().hi = leaf.hi;
    } else if (!unresolved.empty() && unresolved.back().lo == leaf.hi) {
      unresolved.back().lo = leaf.lo;
    } else {
      unresolved.push_back(leaf);
    }
  };

  Item ends{lo, hi, 2, 2, -1, -1, 0};
  mesh_roots_ = 0;
  const int s_lo = endpoint_sign(q, ends, true);
  const int s_hi = endpoint_sign(q, ends, false);
  if (lo == hi) {
    out.count = s_lo == 0 ? 1 : 0;
    return out;
  }
  if (s_lo == 0 && lo_closed) ++out.count;
  if (s_hi == 0 && hi_closed) ++out.count;

  // Graded mesh toward +-1, where the roots of the ensembles concentrate.
  mesh_.clear();
  mesh_.push_back(0.0);
  mesh_.push_back(0.5);
  mesh_.push_back(-0.5);
  for (double s = kMeshStart / static_cast<double>(d); s < 0.5; s *= kMeshRatio) {
    mesh_.push_back(1.0 - s);
    mesh_.push_back(s - 1.0);
  }
  std::sort(mesh_.begin(), mesh_.end());
  mesh_.erase(std::remove_if(mesh_.begin(), mesh_.end(),
                             [&](double x) { return !(x > lo && x < hi); }),
              mesh_.end());
  mesh_.erase(std::unique(mesh_.begin(), mesh_.end()), mesh_.end());
  mesh_sign_.assign(mesh_.size(), 2);

  stack_.clear();
  {
    double prev = lo;
    signed char prev_sign = static_cast<signed char>(s_lo);
    int prev_idx = -1;
    for (std::size_t i = 0; i < mesh_.size(); ++i) {
      stack_.push_back({prev, mesh_[i], prev_sign, 2, prev_idx, static_cast<int>(i), 0});
      prev = mesh_[i];
      prev_sign = 2;
      prev_idx = static_cast<int>(i);
    }
    stack_.push_back({prev, hi, prev_sign, static_cast<signed char>(s_hi), prev_idx, -1, 0});
  }

  const double min_width = (hi - lo) * 0x1.0p-60;
  std::vector<std::pair<double, double>> zones;  // exact root -> root-free half-width
  std::size_t budget = kMaxProbes;
  std::size_t count = 0;

  while (!stack_.empty()) {
    Item it = stack_.back();
    stack_.pop_back();
    const double c = 0.5 * (it.u + it.v);
    if (!(c > it.u && c < it.v) || it.v - it.u <= min_width || it.depth > kMaxDepth ||
        budget == 0) {
      report(it.u, it.v);
      continue;
    }
    --budget;
    ++probes_;
    const double h = std::max(c - it.u, it.v - c) * (1.0 + 0x1.0p-50);
    const double r = std::max(std::abs(it.u), std::abs(it.v));
    const Probe p = probe(q.data(), abs_.data(), q.size(), c, r);
    const double e0 = gamma * p.a0, e1 = gamma * p.a1, e2 = gamma * p.a2;

    const double free_rhs = h * (std::abs(p.q1) + e1) + h * h * (std::abs(p.q2) + e2) +
                            h * h * h * p.a3;
    if (std::abs(p.q0) - e0 > kSlack * free_rhs) continue;

    const double mono_rhs = 2.0 * h * (std::abs(p.q2) + e2) + 3.0 * h * h * p.a3;
    if (std::abs(p.q1) - e1 > kSlack * mono_rhs) {
      const int su = endpoint_sign(q, it, true);
      const int sv = endpoint_sign(q, it, false);
      if (su * sv < 0) ++count;
      continue;
    }

    // An exact root on either end: drop the certified root-free zone next to
    // it. Deep pieces look their end signs up; shallow ones use known signs.
    int su = it.su, sv = it.sv;
    if (it.depth >= kRootZoneDepth) {
      su = endpoint_sign(q, it, true);
      sv = endpoint_sign(q, it, false);
    } else {
      if (su == 2 && it.mu >= 0) su = mesh_sign_[static_cast<std::size_t>(it.mu)];
      if (sv == 2 && it.mv >= 0) sv = mesh_sign_[static_cast<std::size_t>(it.mv)];
    }
    if (su == 0 || sv == 0) {
      const double x0 = su == 0 ? it.u : it.v;
      auto z = std::find_if(zones.begin(), zones.end(),
                            [&](const auto& e) { return e.first == x0; });
      if (z == zones.end()) {
        zones.emplace_back(x0, root_free_width(q, x0, 2.0).value_or(0.0));
        z = zones.end() - 1;
      }
      const double w = z->second;
      if (w > 0.0) {
        if (w >= it.v - it.u) continue;
        const double x = su == 0 ? it.u + w : it.v - w;
        if (x > it.u && x < it.v && abs(mpq_class(x) - mpq_class(x0)) <= mpq_class(w)) {
          if (su == 0) {
            stack_.push_back({x, it.v, 2, it.sv, -1, it.mv, it.depth + 1});
          } else {
            stack_.push_back({it.u, x, it.su, 2, it.mu, -1, it.depth + 1});
          }
          continue;
        }
      }
    }

    int sc = std::abs(p.q0) > e0 * kSlack ? sign_of(p.q0) : exact_sign(q, c);
    if (sc == 0) ++count;  // exact root at an interior split point
    const auto scs = static_cast<signed char>(sc);
    stack_.push_back({c, it.v, scs, it.sv, -1, it.mv, it.depth + 1});
    stack_.push_back({it.u, c, it.su, scs, it.mu, -1, it.depth + 1});
  }
  out.count += count + mesh_roots_;
  return out;
}

RootCountResult RootCounter::count(std::span<const double> coeffs, const Interval& iv) {
  return count_impl(coeffs, iv, false);
}

RootCountResult RootCounter::count_split(std::span<const double> coeffs, const Interval& iv) {
  return count_impl(coeffs, iv, true);
}

RootCountResult RootCounter::count_impl(std::span<const double> coeffs, const Interval& iv,
                                        bool force_split) {
  std::size_t k0 = 0;
  while (k0 < coeffs.size() && coeffs[k0] == 0.0) ++k0;
  if (k0 == coeffs.size()) {
    throw std::invalid_argument("cannot count roots of the identically zero polynomial");
  }
  for (double a : coeffs) {
    if (!std::isfinite(a)) throw std::invalid_argument("polynomial coefficients must be finite");
  }
  std::size_t kn = coeffs.size() - 1;
  while (coeffs[kn] == 0.0) --kn;

  RootCountResult res;
  if (iv.empty()) return res;
  if (k0 > 0 && iv.contains(0.0)) res.count = 1;

  // r = p / t^k0 with vanishing top coefficients dropped; r(0) != 0.
  stripped_.assign(coeffs.begin() + static_cast<std::ptrdiff_t>(k0),
                   coeffs.begin() + static_cast<std::ptrdiff_t>(kn) + 1);
  const std::size_t d = stripped_.size() - 1;
  if (d == 0) return res;

  const double m = std::max(std::abs(iv.lo), std::abs(iv.hi));
  bool split = force_split || !iv.bounded();
  int k = 0;
  if (!split && m > 1.0) {
    k = ceil_log2(m);
    // Rescaling t = 2^k x divides a_j by 2^{k(d-j)}; give up on it if any
    // coefficient would leave the normal range.
    for (std::size_t j = 0; j <= d && !split; ++j) {
      if (stripped_[j] == 0.0) continue;
      const long e = static_cast<long>(std::ilogb(stripped_[j])) -
                     static_cast<long>(k) * static_cast<long>(d - j);
      if (e < -960) split = true;
    }
  }

  auto accumulate = [&](const Core& c) {
    res.count += c.count;
    res.certified = res.certified && c.certified;
  };

  if (!split) {
    if (k == 0) {
      accumulate(count_unit(stripped_, iv.lo, iv.lo_closed, iv.hi, iv.hi_closed, res.unresolved,
                            1.0, false));
    } else {
      work_.resize(d + 1);
      for (std::size_t j = 0; j <= d; ++j) {
        work_[j] = std::ldexp(stripped_[j], -k * static_cast<int>(d - j));
      }
      accumulate(count_unit(work_, std::ldexp(iv.lo, -k), iv.lo_closed, std::ldexp(iv.hi, -k),
                            iv.hi_closed, res.unresolved, std::ldexp(1.0, k), false));
    }
    return res;
  }

  if (auto inner = intersect(iv, Interval::closed(-1.0, 1.0))) {
    accumulate(count_unit(stripped_, inner->lo, inner->lo_closed, inner->hi, inner->hi_closed,
                          res.unresolved, 1.0, false));
  }
  const auto images = reciprocal_image(iv);
  if (!images.empty()) {
    work_.assign(stripped_.rbegin(), stripped_.rend());
    for (const Interval& im : images) {
      accumulate(count_unit(work_, im.lo, im.lo_closed, im.hi, im.hi_closed, res.unresolved, 1.0,
                            true));
    }
  }
  return res;
}

RootCountResult count_certified(std::span<const double> coeffs, const Interval& iv) {
  RootCounter rc;
  return rc.count(coeffs, iv);
}

RootCountResult count_certified(const PolynomialSample& s, const Interval& iv) {
  return count_certified(std::span<const double>(s.coeffs), iv);
}

RootCountResult count_split_reciprocal(std::span<const double> coeffs, const Interval& iv) {
  RootCounter rc;
  return rc.count_split(coeffs, iv);
}

RootCountResult count_split_reciprocal(const PolynomialSample& s, const Interval& iv) {
  return count_split_reciprocal(std::span<const double>(s.coeffs), iv);
}

}  // namespace randpoly
