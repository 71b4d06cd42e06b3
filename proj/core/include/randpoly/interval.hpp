#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace randpoly {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A real interval with independently open or closed endpoints.
///
/// The default is the half-open convention [lo, hi) used throughout root
/// counting, so that counts over disjoint covers add exactly. Infinite
/// endpoints are always treated as open.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = false;

  static Interval half_open(double lo, double hi) { return {lo, hi, true, false}; }
  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval real_line() { return {-kInfinity, kInfinity, false, false}; }

  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

  bool empty() const {
    if (lo > hi) return true;
    if (lo == hi) return !(lo_closed && hi_closed);
    return false;
  }

  bool contains(double t) const {
    if (t < lo || t > hi) return false;
    if (t == lo && !lo_closed) return false;
    if (t == hi && !hi_closed) return false;
    return true;
  }

  double width() const { return hi - lo; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Intersection of two intervals, or nullopt when empty.
std::optional<Interval> intersect(const Interval& a, const Interval& b);

std::string to_string(const Interval& iv);

/// Inverse of to_string: "[a, b)", "(-inf, 2]" and so on; "R" is the real line.
Interval parse_interval(std::string_view text);

/// Disjoint pieces joined by " U ", e.g. "[-0.5, 0.5] U (-inf, -2] U [2, inf)".
std::vector<Interval> parse_interval_set(std::string_view text);
std::string to_string(const std::vector<Interval>& set);

}  // namespace randpoly
