#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "randpoly/ensembles.hpp"
#include "randpoly/kacrice.hpp"
#include "randpoly/montecarlo.hpp"

using namespace randpoly;
using Catch::Approx;

namespace {

const NoiseSpec kGauss{};
const NoiseSpec kRad{NoiseFamily::rademacher, 0.0};

// Monic polynomial with the given roots, as a profile with no noise.
CoefficientProfile fixed(const std::vector<double>& roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j + 1] += c[j];
      next[j] -= r * c[j];
    }
    c = next;
  }
  return CoefficientProfile::degenerate(c, std::vector<double>(c.size(), 0.0));
}

}  // namespace

TEST_CASE("summary statistics") {
  const std::vector<double> v{1, 2, 3, 4};
  const auto s = summarize(v, 4);
  CHECK(s.mean == 2.5);
  CHECK(s.variance == Approx(5.0 / 3.0));
  CHECK(s.std_error == Approx(std::sqrt(s.variance / 4.0)));
  CHECK(s.ci_lo == Approx(s.mean - 1.96 * s.std_error));
  CHECK(s.ci_hi == Approx(s.mean + 1.96 * s.std_error));
  CHECK_FALSE(s.flagged);
  const auto lossy = summarize(v, 5);
  CHECK(lossy.discarded == 1);
  CHECK(lossy.accepted() == 4);
  CHECK(lossy.flagged);
  CHECK(lossy.mean == 2.5);
  CHECK_THROWS_AS(summarize(v, 3), std::invalid_argument);
}

TEST_CASE("degree-one Gaussian count on the line") {
  const auto s = estimate_EN(power_profile(1, 0.0), kGauss, Interval::real_line(), 100000, 42);
  CHECK(std::abs(s.mean - 1.0) <= 3.0 * s.std_error);
  CHECK(s.discarded == 0);
}

TEST_CASE("degree-one Rademacher roots sit at +-1") {
  const auto s = estimate_EN(power_profile(1, 0.0), kRad, Interval::open(-2, 2), 5000, 1);
  CHECK(s.mean == 1.0);
  CHECK(s.std_error == 0.0);
}

TEST_CASE("same seed, same statistics") {
  const auto p = hyperbolic_profile(2.0, 100, 0.5);
  const auto a = estimate_EN(p, kGauss, Interval::half_open(-1.5, 1.5), 3000, 99);
  const auto b = estimate_EN(p, kGauss, Interval::half_open(-1.5, 1.5), 3000, 99);
  CHECK(a == b);
  CHECK(estimate_EN(p, kGauss, Interval::half_open(-1.5, 1.5), 3000, 100).mean != a.mean);
}

TEST_CASE("results do not depend on the worker count") {
  const auto p = power_profile(200, 0.0);
  const std::vector<Interval> ivs{Interval::real_line(), Interval::half_open(0.9, 1.1)};
  MonteCarloOptions one, four;
  one.threads = 1;
  four.threads = 4;
  CHECK(simulate_counts(p, kRad, ivs, 2000, 5, one) == simulate_counts(p, kRad, ivs, 2000, 5, four));
  CHECK(estimate_EN(p, kGauss, ivs[0], 1500, 6, one) == estimate_EN(p, kGauss, ivs[0], 1500, 6, four));
}

TEST_CASE("split runs pool to the single-run mean") {
  const auto p = power_profile(64, 0.5);
  const Interval iv = Interval::real_line();
  const auto whole = estimate_EN(p, kGauss, iv, 4000, 17);
  MonteCarloOptions second;
  second.first_trial = 2000;
  const auto a = estimate_EN(p, kGauss, iv, 2000, 17);
  const auto b = estimate_EN(p, kGauss, iv, 2000, 17, second);
  CHECK((a.mean * 2000 + b.mean * 2000) / 4000 == whole.mean);
}

TEST_CASE("confidence intervals cover the degree-one expectation") {
  // On (-1, 1) the Cauchy-distributed root lands inside with probability 1/2.
  const auto p = power_profile(1, 0.0);
  int covered = 0;
  for (std::uint64_t run = 0; run < 100; ++run) {
    const auto s = estimate_EN(p, kGauss, Interval::open(-1, 1), 10000, 1000 + run);
    covered += s.ci_lo <= 0.5 && 0.5 <= s.ci_hi;
  }
  CHECK(covered >= 90);
}

TEST_CASE("discarded draws are tallied and flagged") {
  const CoefficientProfile p({1.0, 1.0}, {1.0, 1.0}, 0.0);
  const auto s = estimate_EN(p, kRad, Interval::real_line(), 4000, 3);
  CHECK(s.discarded > 800);
  CHECK(s.discarded < 1200);
  CHECK(s.flagged);
  // Kept draws 2 + 2t, 2 and 2t have 1, 0 and 1 real roots.
  CHECK(std::abs(s.mean - 2.0 / 3.0) <= 4.0 * s.std_error);
}

TEST_CASE("moments") {
  const auto two = fixed({-0.5, 0.5});
  CHECK(estimate_moment(two, kGauss, Interval::open(-1, 1), 2, 10, 0).mean == 4.0);
  CHECK(estimate_moment(two, kGauss, Interval::open(-1, 1), 3, 10, 0).mean == 8.0);
  const auto p = power_profile(50, 0.0);
  CHECK(estimate_moment(p, kGauss, Interval::real_line(), 1, 500, 8) ==
        estimate_EN(p, kGauss, Interval::real_line(), 500, 8));
  CHECK_THROWS_AS(estimate_moment(p, kGauss, Interval::real_line(), 5, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(estimate_moment(p, kGauss, Interval::real_line(), 0, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(estimate_EN(p, kGauss, Interval::real_line(), 0, 0), std::invalid_argument);
}

TEST_CASE("local second moments grow at most polylogarithmically") {
  const auto p = power_profile(256, 0.0);
  double prev = 0.0;
  for (int e = 2; e <= 7; ++e) {
    const double delta = std::ldexp(1.0, -e);
    const Interval iv = Interval::closed(1.0 - 2.0 * delta, 1.0 - delta);
    const double m2 = estimate_moment(p, kGauss, iv, 2, 4000, 21).mean;
    const double L = std::log(1.0 / delta);
    INFO("delta 2^-" << e << " E N^2 " << m2);
    CHECK(m2 <= std::pow(L, 2));
    CHECK(m2 > 0.0);
    prev = m2;
  }
  CHECK(prev > 0.0);
}

TEST_CASE("small-ball probabilities") {
  const auto kac = power_profile(64, 0.0);
  CHECK(small_ball(kac, kGauss, 0.9, 0.0, kInfinity, 1000, 1).probability == 1.0);
  const auto constant = power_profile(0, 0.0);
  CHECK(small_ball(constant, kRad, 0.3, 0.0, 0.5, 1000, 1).probability == 0.0);
  const std::vector<double> ts{1.0, 0.1, 0.01};
  const auto est = small_ball(kac, kGauss, 0.875, 0.0, ts, 5000, 4);
  REQUIRE(est.size() == 3);
  CHECK(est[0].probability >= est[1].probability);
  CHECK(est[1].probability >= est[2].probability);
  CHECK(est[0].probability == small_ball(kac, kGauss, 0.875, 0.0, 1.0, 5000, 4).probability);
  const double p0 = est[0].probability;
  CHECK(est[0].std_error == Approx(std::sqrt(p0 * (1 - p0) / 5000)));
  CHECK_THROWS_AS(small_ball(kac, kGauss, 0.9, 0.0, 1.0, 999, 1), std::invalid_argument);
}

TEST_CASE("pair counts") {
  CHECK(pair_count(fixed({0.85, 0.9}), kGauss, 0.875, 0.05, 10, 0).mean == 2.0);
  CHECK(pair_count(fixed({0.85, 0.5}), kGauss, 0.875, 0.05, 10, 0).mean == 0.0);
  CHECK(pair_count(fixed({0.8, 0.82, 0.84}), kGauss, 0.82, 0.05, 10, 0).mean == 6.0);
  CHECK_THROWS_AS(pair_count(fixed({0.5}), kGauss, 0.5, 0.05, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(pair_count(fixed({0.9}), kGauss, 0.9, 0.0, 10, 0), std::invalid_argument);
}

TEST_CASE("slope fits") {
  std::vector<SlopePoint> exact;
  for (double n : {128.0, 256.0, 512.0, 1024.0}) exact.push_back({n, 0.6366 * std::log(n) + 1.0, 0.0});
  auto f = slope_fit(exact);
  CHECK(f.slope == Approx(0.6366).epsilon(1e-12));
  CHECK(f.intercept == Approx(1.0).epsilon(1e-12));
  CHECK(f.r_squared == Approx(1.0));
  CHECK_FALSE(f.weighted);

  std::vector<SlopePoint> flat{{10, 2, 0.1}, {20, 2, 0.1}, {40, 2, 0.1}};
  f = slope_fit(flat);
  CHECK(f.slope == Approx(0.0).margin(1e-14));
  CHECK(f.weighted);
  CHECK(f.slope_stderr > 0.0);

  CHECK_THROWS_AS(slope_fit(std::vector<SlopePoint>{{1, 1, 0}, {2, 2, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(slope_fit(std::vector<SlopePoint>{{1, 1, 0}, {1, 2, 0}, {2, 2, 0}}),
                  std::invalid_argument);

  std::vector<SlopePoint> kr;
  for (std::size_t n = 128; n <= 8192; n *= 2) {
    kr.push_back({static_cast<double>(n), expected_total(power_profile(n, 0.0)).total, 0.0});
  }
  CHECK(slope_fit(kr).slope == Approx(2.0 / std::numbers::pi).epsilon(0.03));
}

TEST_CASE("trial budgets") {
  CHECK(trials_needed(0.1, 0.05, 1.0) == 8000);
  CHECK(trials_needed(0.3, 1.0, 2.0) == static_cast<std::uint64_t>(std::ceil(4 * 2.0 / 0.09)));
  CHECK(trials_needed(1e9, 0.5, 1.0) == 1);
  CHECK_THROWS_AS(trials_needed(0.0, 0.5, 1.0), std::invalid_argument);
}
