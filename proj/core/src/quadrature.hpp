#pragma once

// Global adaptive Gauss-Kronrod (7/15) quadrature of a two-component
// integrand over a list of knots.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace randpoly::detail {

using Pair = std::array<double, 2>;

struct QuadratureResult {
  Pair value{0.0, 0.0};
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes kKronrodNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  Pair value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod(F& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Pair kron{0.0, 0.0}, gauss{0.0, 0.0};
  const Pair fc = f(mid);
  for (int c = 0; c < 2; ++c) {
    kron[c] = kKronrodWeights[7] * fc[c];
    gauss[c] = kGaussWeights[3] * fc[c];
  }
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[static_cast<std::size_t>(i)];
    const Pair f1 = f(mid - dx);
    const Pair f2 = f(mid + dx);
    for (int c = 0; c < 2; ++c) {
      const double s = f1[c] + f2[c];
      kron[c] += kKronrodWeights[static_cast<std::size_t>(i)] * s;
      if (i % 2 == 1) gauss[c] += kGaussWeights[static_cast<std::size_t>(i / 2)] * s;
    }
  }
  Segment seg{a, b, {kron[0] * half, kron[1] * half}, 0.0};
  seg.error = std::abs((kron[0] - gauss[0]) * half) + std::abs((kron[1] - gauss[1]) * half);
  return seg;
}

template <class F>
QuadratureResult integrate(F&& f, const std::vector<double>& knots, double abs_tol,
                           double rel_tol, std::size_t max_evaluations) {
  QuadratureResult out;
  std::priority_queue<Segment> heap;
  Pair settled{0.0, 0.0};
  double settled_error = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i] < knots[i + 1])) continue;
    heap.push(gauss_kronrod(f, knots[i], knots[i + 1]));
    out.evaluations += 15;
  }

  auto totals = [&](Pair& v, double& e) {
    v = settled;
    e = settled_error;
    auto copy = heap;
    while (!copy.empty()) {
      const Segment& s = copy.top();
      v[0] += s.value[0];
      v[1] += s.value[1];
      e += s.error;
      copy.pop();
    }
  };

  Pair value;
  double error;
  totals(value, error);
  // Running sums, refreshed from scratch now and then against drift.
  std::size_t since_refresh = 0;
  while (!heap.empty()) {
    const double tol = std::max(abs_tol, rel_tol * std::abs(value[0] + value[1]));
    if (error <= tol) break;
    if (out.evaluations + 30 > max_evaluations) {
      out.converged = false;
      break;
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        worst.b - worst.a < 1e-15 * std::max(1.0, std::abs(mid))) {
      settled[0] += worst.value[0];
      settled[1] += worst.value[1];
      settled_error += worst.error;
      continue;
    }
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    out.evaluations += 30;
    for (int c = 0; c < 2; ++c) {
      value[static_cast<std::size_t>(c)] +=
          left.value[static_cast<std::size_t>(c)] + right.value[static_cast<std::size_t>(c)] -
          worst.value[static_cast<std::size_t>(c)];
    }
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (++since_refresh == 256) {
      totals(value, error);
      since_refresh = 0;
    }
  }
  totals(value, error);
  out.value = value;
  out.error = error;
  if (out.converged) {
    out.converged = error <= std::max(abs_tol, rel_tol * std::abs(value[0] + value[1]));
  }
  return out;
}

}  // namespace randpoly::detail
