#include "randpoly/serialization.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace randpoly {

using nlohmann::json;

namespace {

// JSON has no infinities or NaN; those go out as strings.
json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("expected a number, got " + j.dump());
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void to_json(json& j, const Interval& iv) { j = to_string(iv); }

void from_json(const json& j, Interval& iv) { iv = parse_interval(j.get<std::string>()); }

void to_json(json& j, const NoiseSpec& s) {
  j = json{{"family", std::string(to_string(s.family))}, {"mu", s.mu}};
}

void from_json(const json& j, NoiseSpec& s) {
  s.family = noise_family_from_string(j.at("family").get<std::string>());
  s.mu = j.value("mu", 0.0);
}

json profile_to_json(const CoefficientProfile& p) {
  return json{{"n", p.degree()},
              {"rho", p.rho()},
              {"b", p.means()},
              {"c", p.sigmas()},
              {"family", p.family_tag()}};
}

CoefficientProfile profile_from_json(const json& j) {
  auto b = j.at("b").get<std::vector<double>>();
  auto c = j.at("c").get<std::vector<double>>();
  const double rho = j.at("rho").get<double>();
  const std::string tag = j.value("family", std::string("custom"));
  if (j.contains("n") && j.at("n").get<std::size_t>() + 1 != b.size()) {
    throw std::invalid_argument("profile JSON: n does not match the coefficient count");
  }
  bool random = false;
  for (double x : c) random = random || x != 0.0;
  if (!random) return CoefficientProfile::degenerate(std::move(b), std::move(c), rho, tag);
  return CoefficientProfile(std::move(b), std::move(c), rho, tag);
}

void to_json(json& j, const KacRiceResult& r) {
  j = json{{"i1", r.i1},
           {"i2", r.i2},
           {"total", r.total},
           {"err", r.error_estimate},
           {"interval", r.interval},
           {"profile_id", r.profile_id},
           {"evaluations", r.evaluations},
           {"converged", r.converged},
           {"abs_tol", r.abs_tol},
           {"rel_tol", r.rel_tol}};
}

void from_json(const json& j, KacRiceResult& r) {
  r.i1 = j.at("i1").get<double>();
  r.i2 = j.at("i2").get<double>();
  r.total = j.at("total").get<double>();
  r.error_estimate = j.at("err").get<double>();
  r.interval = j.at("interval").get<Interval>();
  r.profile_id = j.at("profile_id").get<std::string>();
  r.evaluations = j.value("evaluations", std::size_t{0});
  r.converged = j.value("converged", true);
  r.abs_tol = j.value("abs_tol", 0.0);
  r.rel_tol = j.value("rel_tol", 0.0);
}

void to_json(json& j, const SideReport& s) {
  j = json{{"side", s.side},
           {"regime", std::string(to_string(s.regime))},
           {"span", s.span},
           {"epsilon", number(s.epsilon)},
           {"k2_max", number(s.k2_max)},
           {"worst_ratio", number(s.worst_ratio)},
           {"min_margin", number(s.min_margin)},
           {"grid_points", s.grid.size()}};
}

void from_json(const json& j, SideReport& s) {
  s.side = j.at("side").get<int>();
  s.regime = regime_from_string(j.at("regime").get<std::string>());
  s.span = j.at("span").get<Interval>();
  s.epsilon = read_number(j.at("epsilon"));
  s.k2_max = read_number(j.at("k2_max"));
  s.worst_ratio = read_number(j.at("worst_ratio"));
  s.min_margin = read_number(j.at("min_margin"));
  s.grid.clear();  // the grid itself is not serialized
}

void to_json(json& j, const RegimeReport& r) {
  j = json{{"regime", std::string(to_string(r.regime))},
           {"interval", r.interval},
           {"enlarged", r.enlarged},
           {"clipped", r.clipped},
           {"C", r.C},
           {"grid_size", r.grid_size},
           {"epsilon", number(r.epsilon)},
           {"worst_ratio", number(r.worst_ratio)},
           {"min_margin", number(r.min_margin)},
           {"sides", r.sides}};
}

void from_json(const json& j, RegimeReport& r) {
  r.regime = regime_from_string(j.at("regime").get<std::string>());
  r.interval = j.at("interval").get<Interval>();
  r.enlarged = j.at("enlarged").get<Interval>();
  r.clipped = j.at("clipped").get<bool>();
  r.C = j.at("C").get<double>();
  r.grid_size = j.at("grid_size").get<std::size_t>();
  r.epsilon = read_number(j.at("epsilon"));
  r.worst_ratio = read_number(j.at("worst_ratio"));
  r.min_margin = read_number(j.at("min_margin"));
  r.sides = j.at("sides").get<std::vector<SideReport>>();
}

void to_json(json& j, const TrialStatistics& s) {
  j = json{{"n_trials", s.trials},  {"discarded", s.discarded}, {"mean", number(s.mean)},
           {"variance", number(s.variance)}, {"stderr", number(s.std_error)},
           {"ci_lo", number(s.ci_lo)}, {"ci_hi", number(s.ci_hi)}, {"flagged", s.flagged}};
}

void from_json(const json& j, TrialStatistics& s) {
  s.trials = j.at("n_trials").get<std::uint64_t>();
  s.discarded = j.at("discarded").get<std::uint64_t>();
  s.mean = read_number(j.at("mean"));
  s.variance = read_number(j.at("variance"));
  s.std_error = read_number(j.at("stderr"));
  s.ci_lo = read_number(j.at("ci_lo"));
  s.ci_hi = read_number(j.at("ci_hi"));
  s.flagged = j.at("flagged").get<bool>();
}

void to_json(json& j, const SlopeFit& f) {
  j = json{{"slope", number(f.slope)},         {"intercept", number(f.intercept)},
           {"r_squared", number(f.r_squared)}, {"slope_stderr", number(f.slope_stderr)},
           {"weighted", f.weighted}};
}

void from_json(const json& j, SlopeFit& f) {
  f.slope = read_number(j.at("slope"));
  f.intercept = read_number(j.at("intercept"));
  f.r_squared = read_number(j.at("r_squared"));
  f.slope_stderr = read_number(j.at("slope_stderr"));
  f.weighted = j.at("weighted").get<bool>();
}

std::string trial_statistics_csv_header() { return "n,trials,mean,stderr,ci_lo,ci_hi,discarded"; }

std::string to_csv_row(std::size_t n, const TrialStatistics& s) {
  return std::to_string(n) + "," + std::to_string(s.trials) + "," + format_double(s.mean) + "," +
         format_double(s.std_error) + "," + format_double(s.ci_lo) + "," +
         format_double(s.ci_hi) + "," + std::to_string(s.discarded);
}

}  // namespace randpoly
