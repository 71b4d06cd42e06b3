#include "randpoly/interval.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>

namespace randpoly {

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  Interval out;
  if (a.lo > b.lo) {
    out.lo = a.lo;
    out.lo_closed = a.lo_closed;
  } else if (b.lo > a.lo) {
    out.lo = b.lo;
    out.lo_closed = b.lo_closed;
  } else {
    out.lo = a.lo;
    out.lo_closed = a.lo_closed && b.lo_closed;
  }
  if (a.hi < b.hi) {
    out.hi = a.hi;
    out.hi_closed = a.hi_closed;
  } else if (b.hi < a.hi) {
    out.hi = b.hi;
    out.hi_closed = b.hi_closed;
  } else {
    out.hi = a.hi;
    out.hi_closed = a.hi_closed && b.hi_closed;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

std::string to_string(const Interval& iv) {
  std::ostringstream os;
  os.precision(17);
  os << (iv.lo_closed ? '[' : '(') << iv.lo << ", " << iv.hi << (iv.hi_closed ? ']' : ')');
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_endpoint(std::string_view s, std::string_view whole) {
  s = trim(s);
  if (s == "inf" || s == "+inf") return kInfinity;
  if (s == "-inf") return -kInfinity;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad interval endpoint '" + std::string(s) + "' in '" +
                                std::string(whole) + "'");
  }
  return x;
}

}  // namespace

Interval parse_interval(std::string_view text) {
  const std::string_view s = trim(text);
  if (s == "R") return Interval::real_line();
  const auto comma = s.find(',');
  if (s.size() < 5 || comma == std::string_view::npos || (s.front() != '[' && s.front() != '(') ||
      (s.back() != ']' && s.back() != ')')) {
    throw std::invalid_argument("bad interval '" + std::string(text) +
                                "' (expected e.g. [a, b), (-inf, inf) or R)");
  }
  Interval iv;
  iv.lo = parse_endpoint(s.substr(1, comma - 1), text);
  iv.hi = parse_endpoint(s.substr(comma + 1, s.size() - comma - 2), text);
  iv.lo_closed = s.front() == '[' && std::isfinite(iv.lo);
  iv.hi_closed = s.back() == ']' && std::isfinite(iv.hi);
  if (iv.lo > iv.hi) throw std::invalid_argument("interval '" + std::string(text) + "' is reversed");
  return iv;
}

std::vector<Interval> parse_interval_set(std::string_view text) {
  std::vector<Interval> out;
  std::size_t start = 0;
  for (;;) {
    const auto sep = text.find(" U ", start);
    out.push_back(parse_interval(text.substr(start, sep == std::string_view::npos ? sep : sep - start)));
    if (sep == std::string_view::npos) break;
    start = sep + 3;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (intersect(out[i], out[j])) {
        throw std::invalid_argument("interval set '" + std::string(text) + "' overlaps itself");
      }
    }
  }
  return out;
}

std::string to_string(const std::vector<Interval>& set) {
  std::string out;
  for (const auto& iv : set) {
    if (!out.empty()) out += " U ";
    out += to_string(iv);
  }
  return out;
}

}  // namespace randpoly
