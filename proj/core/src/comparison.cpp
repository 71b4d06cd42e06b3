#include "randpoly/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "randpoly/polyeval.hpp"

namespace randpoly {

namespace {

struct GridPoint {
  double s;
  double t;
  double r[3];
};

struct Ratios {
  double r0, r1, r2;
};

Ratios ratios_at(const CoefficientProfile& prof, double y) {
  const ScaledMoments s = scaled_moments(prof, y);
  if (!(s.P > 0.0) || !(s.Q > 0.0) || !(s.V2 > 0.0)) {
    throw std::domain_error("dominance ratio undefined: vanishing variance at t = " +
                            std::to_string(y));
  }
  return {std::abs(s.m0) / std::sqrt(s.P), std::abs(s.m1) / std::sqrt(s.Q),
          std::abs(s.m2) / std::sqrt(s.V2)};
}

// Largest eps with r_k(s) <= s^eps at every grid point, i.e. the tightest
// power envelope through (s, r) = (1, 1) in log-log coordinates. Points with
// r = 0 impose nothing; with every r = 0 the envelope exponent is taken as 1.
double envelope_exponent(const std::vector<GridPoint>& pts, int k) {
  double eps = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& p : pts) {
    if (!(p.r[k] > 0.0) || !(p.s < 1.0)) continue;
    eps = std::min(eps, std::log(p.r[k]) / std::log(p.s));
    any = true;
  }
  return any ? eps : 1.0;
}

// Geometric grid of `count` values from a to b (a <= b).
std::vector<double> geometric(double a, double b, std::size_t count) {
  if (!(b > a) || count < 2) return {a};
  std::vector<double> g(count);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  g.front() = a;
  g.back() = b;
  return g;
}

SideReport classify_side(const CoefficientProfile& p, const CoefficientProfile& star, int side,
                         const Interval& span, const ClassifierOptions& opts) {
  SideReport sr;
  sr.side = side;
  sr.span = span;
  const double inv_n = 1.0 / static_cast<double>(std::max<std::size_t>(p.degree(), 1));
  // |t| range of the span.
  const double amin = side > 0 ? span.lo : -span.hi;
  const double amax = side > 0 ? span.hi : -span.lo;

  std::vector<GridPoint> pts;
  auto sample_part = [&](double s_lo, double s_hi, bool outer) {
    for (double s : geometric(s_lo, s_hi, opts.grid_size)) {
      const double y = side * std::min(1.0, 1.0 + inv_n - s);
      const Ratios r = ratios_at(outer ? star : p, y);
      pts.push_back({s, outer ? 1.0 / y : y, {r.r0, r.r1, r.r2}});
    }
  };
  if (amin <= 1.0) {
    const double hi_abs = std::min(amax, 1.0);
    sample_part(1.0 - hi_abs + inv_n, 1.0 - amin + inv_n, false);
  }
  if (amax > 1.0) {
    const double lo_abs = std::max(amin, 1.0);
    sample_part(1.0 - 1.0 / lo_abs + inv_n, 1.0 - 1.0 / amax + inv_n, true);
  }
  std::sort(pts.begin(), pts.end(), [](const GridPoint& a, const GridPoint& b) { return a.t < b.t; });

  sr.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& g : pts) {
    sr.grid.push_back(g.t);
    sr.worst_ratio = std::max({sr.worst_ratio, g.r[0], g.r[1], g.r[2]});
    const double threshold = opts.C * std::sqrt(std::abs(std::log(g.s)));
    sr.min_margin = std::min(sr.min_margin, g.r[0] / threshold);
  }
  const bool mean_dominated = sr.min_margin > 1.0;

  sr.epsilon = std::min(envelope_exponent(pts, 0), envelope_exponent(pts, 1));
  for (const auto& g : pts) sr.k2_max = std::max(sr.k2_max, g.r[2]);
  const bool noise_dominated = sr.epsilon > 0.0 && sr.k2_max <= opts.C;

  if (mean_dominated) {
    sr.regime = Regime::mean_dominated;
  } else if (noise_dominated) {
    sr.regime = Regime::noise_dominated;
  } else {
    sr.regime = Regime::indeterminate;
  }
  return sr;
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::mean_dominated: return "mean-dominated";
    case Regime::noise_dominated: return "noise-dominated";
    case Regime::mixed: return "mixed";
    case Regime::indeterminate: return "indeterminate";
  }
  return "unknown";
}

Regime regime_from_string(std::string_view s) {
  if (s == "mean-dominated") return Regime::mean_dominated;
  if (s == "noise-dominated") return Regime::noise_dominated;
  if (s == "mixed") return Regime::mixed;
  if (s == "indeterminate") return Regime::indeterminate;
  throw std::invalid_argument("unknown regime '" + std::string(s) + "'");
}

double dominance_ratio(const CoefficientProfile& p, double t, int k, bool reciprocal) {
  if (k < 0 || k > 2) throw std::invalid_argument("derivative order must be 0, 1 or 2");
  const double m = mean_derivatives(p, t, k, reciprocal);
  const double v = variance_derivatives(p, t, k, reciprocal);
  if (!(v > 0.0)) throw std::domain_error("dominance ratio undefined: zero variance");
  if (std::abs(t) <= 1.0) {
    // Scale-free form: both numerator and variance share the normalization.
    const ScaledMoments s = reciprocal ? scaled_moments(p.reciprocal(), t) : scaled_moments(p, t);
    const double num = k == 0 ? s.m0 : (k == 1 ? s.m1 : s.m2);
    const double var = k == 0 ? s.P : (k == 1 ? s.Q : s.V2);
    return std::abs(num) / std::sqrt(var);
  }
  return std::abs(m) / std::sqrt(v);
}

RegimeReport classify_regime(const CoefficientProfile& p, const Interval& iv,
                             const ClassifierOptions& opts) {
  if (opts.grid_size < 16) throw std::invalid_argument("grid size must be at least 16");
  if (!(opts.C > 0.0)) throw std::invalid_argument("threshold constant C must be positive");
  if (!(opts.band > 0.0 && opts.band < 1.0)) {
    throw std::invalid_argument("band half-width must lie in (0, 1)");
  }
  if (!p.random()) throw std::invalid_argument("classification needs a random profile");

  RegimeReport rep;
  rep.interval = iv;
  rep.C = opts.C;
  rep.grid_size = opts.grid_size;
  rep.enlarged = enlargement(iv, p.degree(), opts.enlargement_factor);
  const double c = opts.band;
  const Interval& J = rep.enlarged;
  rep.clipped = J.lo < -1.0 - c || J.hi > 1.0 + c ||
                intersect(J, Interval::open(-1.0 + c, 1.0 - c)).has_value();

  const CoefficientProfile star = p.reciprocal();
  for (int side : {-1, 1}) {
    const Interval band = side < 0 ? Interval::closed(-1.0 - c, -1.0 + c)
                                   : Interval::closed(1.0 - c, 1.0 + c);
    const auto span = intersect(J, band);
    if (!span) continue;
    rep.sides.push_back(classify_side(p, star, side, *span, opts));
  }

  if (rep.sides.empty()) {
    rep.regime = Regime::indeterminate;
  } else if (rep.sides.size() == 1) {
    rep.regime = rep.sides[0].regime;
  } else {
    const Regime a = rep.sides[0].regime, b = rep.sides[1].regime;
    if (a == Regime::indeterminate || b == Regime::indeterminate) {
      rep.regime = Regime::indeterminate;
    } else {
      rep.regime = a == b ? a : Regime::mixed;
    }
  }

  rep.epsilon = std::numeric_limits<double>::infinity();
  rep.min_margin = std::numeric_limits<double>::infinity();
  bool any_noise = false, any_mean = false;
  for (const auto& s : rep.sides) {
    rep.worst_ratio = std::max(rep.worst_ratio, s.worst_ratio);
    if (s.regime == Regime::noise_dominated) {
      rep.epsilon = std::min(rep.epsilon, s.epsilon);
      any_noise = true;
    }
    if (s.regime == Regime::mean_dominated) {
      rep.min_margin = std::min(rep.min_margin, s.min_margin);
      any_mean = true;
    }
  }
  if (!any_noise) rep.epsilon = 0.0;
  if (!any_mean) rep.min_margin = 0.0;
  return rep;
}

CountPrediction predict_count(const CoefficientProfile& p, const Interval& iv,
                              const ClassifierOptions& opts, const KacRiceOptions& kr) {
  CountPrediction out;
  out.report = classify_regime(p, iv, opts);
  out.regime = out.report.regime;

  if (p.centered()) {
    out.value = kac_rice_interval(p, iv, kr).total;
    out.description = "centered profile: Kac-Rice expected count";
    return out;
  }

  switch (out.regime) {
    case Regime::noise_dominated:
      out.value = kac_rice_interval(p.centered_copy(), iv, kr).total;
      out.bounded_error_band = true;
      out.description = "noise-dominated: centered Kac-Rice count + O(1)";
      break;
    case Regime::mean_dominated:
      out.value = kac_rice_interval(p, iv, kr).total;
      out.bounded_error_band = true;
      out.order_one = true;
      out.description = "mean-dominated: O(1); value is the full-profile Kac-Rice count";
      break;
    case Regime::mixed: {
      double value = kac_rice_interval(p, iv, kr).total;
      const CoefficientProfile centered = p.centered_copy();
      for (const auto& side : out.report.sides) {
        if (side.regime != Regime::noise_dominated) continue;
        const auto piece = intersect(iv, side.span);
        if (!piece) continue;
        value += kac_rice_interval(centered, *piece, kr).total -
                 kac_rice_interval(p, *piece, kr).total;
      }
      out.value = value;
      out.bounded_error_band = true;
      out.description =
          "mixed: centered count on noise-dominated sides, full profile elsewhere, + O(1)";
      break;
    }
    case Regime::indeterminate:
      out.description = "indeterminate: no prediction";
      break;
  }
  return out;
}

}  // namespace randpoly
