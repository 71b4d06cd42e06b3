// Acceptance run: one line per criterion, nonzero exit status if any fails.
//
//   randpoly_acceptance            all criteria
//   randpoly_acceptance 2 9        selected criteria

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "exponent_fit.hpp"
#include "randpoly/ensembles.hpp"
#include "randpoly/experiments.hpp"
#include "randpoly/kacrice.hpp"
#include "randpoly/montecarlo.hpp"
#include "randpoly/polyeval.hpp"
#include "randpoly/rootcount.hpp"

using namespace randpoly;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 5) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentRecord run_registered(const std::string& name, std::uint64_t seed,
                                const json& overrides = json::object()) {
  json j = overrides;
  j["name"] = name;
  j["seed"] = seed;
  return compute_experiment(config_from_json(j));
}

Outcome from_record(const ExperimentRecord& r, double limit_seconds = 0.0) {
  Outcome o{r.verdict.value_or(false), r.verdict_detail};
  o.detail += " [" + fmt(r.wall_clock_seconds, 3) + " s";
  if (limit_seconds > 0.0) {
    const bool fast = r.wall_clock_seconds < limit_seconds;
    o.detail += fast ? "" : ", over the " + fmt(limit_seconds, 3) + " s limit";
    o.pass = o.pass && fast;
  }
  o.detail += "]";
  return o;
}

Outcome degree_one() {
  const auto t0 = std::chrono::steady_clock::now();
  const CoefficientProfile lin({0, 0}, {1, 1}, 0.0);
  const double line = expected_total(lin).total;
  const double unit = kac_rice_interval(lin, Interval::open(-1, 1)).total;
  const double arctan = 2.0 / std::numbers::pi * std::atan(1.0);
  const auto mc = estimate_EN(lin, NoiseSpec{}, Interval::real_line(), 100000, 1);
  const double secs = seconds_since(t0);
  const bool kr_ok = std::abs(line - 1.0) <= 1e-6 && std::abs(unit - arctan) <= 1e-6;
  const bool mc_ok = std::abs(mc.mean - 1.0) <= 3.0 * mc.std_error;
  std::ostringstream d;
  d.precision(10);
  d << "Kac-Rice on R " << line << ", on (-1, 1) " << unit << " vs arctan form " << arctan
    << (kr_ok ? " ok" : " FAIL") << "; Monte Carlo " << fmt(mc.mean, 6) << " +- "
    << fmt(mc.std_error, 3) << (mc_ok ? " ok" : " FAIL") << " [" << fmt(secs, 3) << " s]";
  return {kr_ok && mc_ok && secs < 10.0, d.str()};
}

Outcome centered_slope() {
  const auto r = run_registered("centered-slope", 11, {{"noise", "rademacher"}});
  Outcome o = from_record(r, 600.0);
  // The 95% CI of the Monte Carlo slope must reach the predicted slope.
  const bool ci = r.fit->ci_lo() <= *r.predicted_slope && *r.predicted_slope <= r.fit->ci_hi();
  o.pass = o.pass && ci;
  o.detail += "; MC slope CI [" + fmt(r.fit->ci_lo()) + ", " + fmt(r.fit->ci_hi()) + "] " +
              (ci ? "contains " : "misses ") + fmt(*r.predicted_slope);
  return o;
}

Outcome halving_kac() { return from_record(run_registered("halving", 12), 600.0); }

Outcome halving_l4() {
  return from_record(run_registered("halving", 13, {{"profile", "hyperbolic"}, {"L", 4.0}}));
}

Outcome derivative() { return from_record(run_registered("derivative-slope", 14)); }

Outcome mean_flat() { return from_record(run_registered("mean-dominated-flat", 15)); }

Outcome universality() { return from_record(run_registered("universality-pair", 16)); }

Outcome kacrice_vs_mc() {
  const auto centered = run_registered("kacrice-vs-mc", 17);
  const auto root = run_registered("kacrice-vs-mc", 17, {{"mu", 1.0}});
  const auto literal =
      run_registered("kacrice-vs-mc", 17, {{"mu", 1.0}, {"erf_denominator", "literal-s"}});
  const bool c = *centered.verdict, s = *root.verdict, l = *literal.verdict;
  std::string chosen = s && !l ? "sqrt-s" : (l && !s ? "literal-s" : "none");
  if (s && l) chosen = "both (not separated)";
  std::ostringstream d;
  d << "centered: " << (c ? "pass" : "FAIL") << "; mean 1 " << root.verdict_detail << " "
    << (s ? "pass" : "fail") << "; mean 1 " << literal.verdict_detail << " "
    << (l ? "pass" : "fail") << "; erf denominator resolved: " << chosen;
  return {c && (s != l), d.str()};
}

Outcome oracle_agreement() {
  std::mt19937_64 rng(20240519);
  std::uniform_int_distribution<int> coef(-9, 9), deg(1, 64), kind(0, 9);
  std::uniform_int_distribution<int> grid(-160, 160);  // endpoints on a 1/64 grid in [-2.5, 2.5]
  RootCounter counter;
  std::size_t total = 0, unresolved = 0, mismatched = 0;
  std::string first_mismatch;
  for (int poly = 0; poly < 1000; ++poly) {
    std::vector<double> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (double& x : c) x = coef(rng);
    while (c.back() == 0.0) c.back() = coef(rng);
    const SturmChain chain(c);
    for (int k = 0; k < 100; ++k) {
      double a = grid(rng) / 64.0, b = grid(rng) / 64.0;
      if (a > b) std::swap(a, b);
      if (a == b) b += 1.0 / 64.0;
      Interval iv = Interval::half_open(a, b);
      // One in ten reaches to infinity.
      switch (kind(rng)) {
        case 0: iv = k % 2 ? Interval{-kInfinity, a, false, false} : Interval{b, kInfinity, true, false}; break;
        case 1: if (k % 7 == 0) iv = Interval::real_line(); break;
        default: break;
      }
      const auto r = counter.count(c, iv);
      ++total;
      if (!r.certified) {
        ++unresolved;
        continue;
      }
      if (r.count != chain.count(iv)) {
        if (mismatched++ == 0) {
          first_mismatch = "polynomial " + std::to_string(poly) + " on " + to_string(iv);
        }
      }
    }
  }
  const double rate = static_cast<double>(unresolved) / static_cast<double>(total);
  std::ostringstream d;
  d << total << " counts, " << mismatched << " disagreements with the Sturm oracle"
    << (first_mismatch.empty() ? "" : " (first: " + first_mismatch + ")") << ", unresolved rate "
    << fmt(100.0 * rate, 3) << "% (limit 0.1%)";
  return {mismatched == 0 && rate < 1e-3, d.str()};
}

Outcome reciprocity() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> deg(2, 128), family(0, 3);
  std::uniform_real_distribution<double> u(1.0, 8.0);
  const NoiseSpec noises[4] = {{NoiseFamily::gaussian, 0}, {NoiseFamily::rademacher, 0},
                               {NoiseFamily::uniform, 0}, {NoiseFamily::two_point, 0}};
  RootCounter direct, star;
  std::size_t compared = 0, mismatched = 0, uncertified = 0;
  for (std::uint64_t trial = 0; trial < 10000; ++trial) {
    const auto n = static_cast<std::size_t>(deg(rng));
    const int f = family(rng);
    const CoefficientProfile p = f == 0   ? power_profile(n, 0.0)
                                 : f == 1 ? hyperbolic_profile(2.0, n, 0.5)
                                 : f == 2 ? power_profile(n, 1.0, 1.0, 0.5)
                                          : mixed_sign_profile(n, 0.0, 0.0, -1.0);
    std::vector<double> a;
    if (!sample_into(p, noises[trial % 4], 31337, trial, a)) continue;
    const std::vector<double> r(a.rbegin(), a.rend());

    // A random interval beyond +-1 and its image under t -> 1/t.
    double lo = u(rng), hi = u(rng);
    if (lo > hi) std::swap(lo, hi);
    const double sign = rng() % 2 ? 1.0 : -1.0;
    std::vector<std::pair<Interval, Interval>> pairs;
    if (sign > 0) {
      pairs.push_back({Interval::half_open(lo, hi), Interval{1.0 / hi, 1.0 / lo, false, true}});
    } else {
      pairs.push_back({Interval::half_open(-hi, -lo), Interval{-1.0 / lo, -1.0 / hi, false, true}});
    }
    // The whole exterior, closed off at a power of two above the Cauchy bound
    // so the direct count runs on p itself rather than through the reversal.
    const double bound = std::exp2(std::ceil(std::log2(global_root_bound(a))));
    if (bound <= 128.0) {
      pairs.push_back({Interval::open(1.0, bound), Interval::open(0.0, 1.0)});
      pairs.push_back({Interval::open(-bound, -1.0), Interval::open(-1.0, 0.0)});
    }
    for (const auto& [outer, inner] : pairs) {
      // Zero coefficients at the top of p are roots of p* at 0, which the
      // open image intervals exclude.
      const auto x = direct.count(a, outer);
      const auto y = star.count(r, inner);
      ++compared;
      if (!x.certified || !y.certified) {
        ++uncertified;
        continue;
      }
      if (x.count != y.count) ++mismatched;
    }
  }
  std::ostringstream d;
  d << compared << " interval pairs over 10000 samples: " << mismatched << " mismatches, "
    << uncertified << " uncertified";
  return {mismatched == 0 && uncertified == 0 && compared >= 10000, d.str()};
}

Outcome bulk() { return from_record(run_registered("bulk-O1", 18)); }

Outcome small_ball_decay() { return from_record(run_registered("small-ball-decay", 19)); }

Outcome variance_exponents() {
  bool ok = true;
  std::ostringstream d;
  for (double rho : {0.0, 0.5, 1.5}) {
    const auto g = testing::growth_exponents(power_profile(4096, rho));
    const double wp = -(2 * rho + 1), wq = -(2 * rho + 3), wr = -(2 * rho + 2);
    const bool good = std::abs(g.P - wp) <= 0.1 && std::abs(g.Q - wq) <= 0.1 &&
                      std::abs(g.R - wr) <= 0.1;
    ok = ok && good;
    d << "rho " << rho << ": P " << fmt(g.P, 4) << " (" << wp << "), Q " << fmt(g.Q, 4) << " ("
      << wq << "), |R| " << fmt(g.R, 4) << " (" << wr << ")" << (good ? " ok" : " FAIL") << "; ";
  }
  return {ok, d.str()};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "degree-1 closed form", degree_one},
      {2, "centered Kac slope 2/pi", centered_slope},
      {3, "halving under nonzero mean, L=1", halving_kac},
      {4, "hyperbolic L=4 with mean, slope 3/(2 pi)", halving_l4},
      {5, "derivative ensemble, slope (1+sqrt 3)/(2 pi)", derivative},
      {6, "mean-dominated flatness", mean_flat},
      {7, "universality Gaussian vs Rademacher", universality},
      {8, "Kac-Rice vs Monte Carlo, erf denominator", kacrice_vs_mc},
      {9, "certified counter vs Sturm oracle", oracle_agreement},
      {10, "reciprocity of counts", reciprocity},
      {11, "bulk flatness away from +-1", bulk},
      {12, "small-ball monotone decay", small_ball_decay},
      {13, "variance growth exponents", variance_exponents},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    ++ran;
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.title << ": " << o.detail
              << std::endl;
  }
  std::cout << ran - failed << "/" << ran << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
