#include <catch_amalgamated.hpp>

#include <cmath>

#include "randpoly/comparison.hpp"
#include "randpoly/ensembles.hpp"
#include "randpoly/kacrice.hpp"

using namespace randpoly;
using Catch::Approx;

namespace {

double loglog_slope(const CoefficientProfile& p, double s_lo, double s_hi, int k) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = 40;
  for (int i = 0; i < m; ++i) {
    const double s = std::exp(std::log(s_lo) + (std::log(s_hi) - std::log(s_lo)) * i / (m - 1));
    const double x = std::log(s), y = std::log(dominance_ratio(p, -1.0 + s, k));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

TEST_CASE("dominance ratio") {
  const auto centered = power_profile(30, 0.0);
  for (int k = 0; k <= 2; ++k) {
    CHECK(dominance_ratio(centered, 0.9, k) == 0.0);
    CHECK(dominance_ratio(centered, 0.9, k, true) == 0.0);
  }
  CHECK(dominance_ratio(CoefficientProfile({1, 0}, {1, 1}, 0.0), 0.0, 0) == Approx(1.0));
  CHECK_THROWS_AS(dominance_ratio(CoefficientProfile({1, 0}, {0, 1}, 0.0), 0.0, 0),
                  std::domain_error);
}

TEST_CASE("Kac mean cancels near -1") {
  // m(t) = (1 - t^{n+1}) / (1 - t) stays bounded at t = -1 + s while
  // sqrt(P) grows like (2s)^{-1/2}: the ratio decays like s^{1/2}.
  const auto p = hyperbolic_profile(1.0, 100000, 1.0);
  const double slope = loglog_slope(p, 1e-3, 1e-1, 0);
  CHECK(slope == Approx(0.5).margin(0.05));
  for (double s : {1e-3, 1e-2, 1e-1}) CHECK(dominance_ratio(p, -1.0 + s, 0) < std::sqrt(s));
  // Near +1 the same mean adds up coherently.
  CHECK(dominance_ratio(p, 1.0 - 1e-3, 0) > 10.0);
}

TEST_CASE("classifier examples") {
  ClassifierOptions opts;
  const auto centered = classify_regime(power_profile(1024, 0.0), Interval::half_open(0.97, 1.02), opts);
  CHECK(centered.regime == Regime::noise_dominated);
  CHECK(centered.epsilon > 0.0);

  // Mean domination with C = 3 needs the enlarged interval within about
  // 0.01 of +1: the ratio there is ~1/sqrt(2s) against 3 sqrt(ln 1/s).
  const auto large = classify_regime(mixed_sign_profile(1024, 0.0, 0.0, -1.0),
                                     Interval::half_open(0.995, 1.005), opts);
  CHECK(large.regime == Regime::mean_dominated);
  CHECK(large.min_margin > 1.0);

  const auto kac = hyperbolic_profile(1.0, 1024, 1.0);
  const auto both = classify_regime(kac, Interval::open(-1.0 - 1.0 / 3.0, 1.0 + 1.0 / 3.0), opts);
  CHECK(both.regime == Regime::mixed);
  CHECK(both.clipped);
  REQUIRE(both.sides.size() == 2);
  for (const auto& side : both.sides) {
    CHECK(side.regime == (side.side < 0 ? Regime::noise_dominated : Regime::mean_dominated));
  }

  opts.grid_size = 8;
  CHECK_THROWS_AS(classify_regime(kac, Interval::half_open(0.99, 1.01), opts),
                  std::invalid_argument);
}

TEST_CASE("noise-dominated verdicts carry a positive exponent") {
  for (const auto& p : {power_profile(2048, 0.0), power_profile(2048, 1.0),
                        hyperbolic_profile(1.0, 2048, 1.0)}) {
    const auto r = classify_regime(p, Interval::half_open(-1.05, -0.95));
    for (const auto& side : r.sides) {
      if (side.regime == Regime::noise_dominated) {
        CHECK(side.epsilon > 0.0);
        CHECK(side.k2_max <= r.C);
      }
    }
    if (r.regime == Regime::noise_dominated) CHECK(r.epsilon > 0.0);
  }
}

TEST_CASE("classification is invariant under joint scaling") {
  const auto p = hyperbolic_profile(1.0, 512, 1.0);
  const Interval iv = Interval::open(-1.1, 1.1);
  const auto a = classify_regime(p, iv);
  const auto b = classify_regime(p.scaled(1e-3), iv);
  CHECK(a.regime == b.regime);
  CHECK(b.epsilon == Approx(a.epsilon).epsilon(1e-10));
  CHECK(b.min_margin == Approx(a.min_margin).epsilon(1e-10));
  CHECK(b.worst_ratio == Approx(a.worst_ratio).epsilon(1e-10));
  REQUIRE(a.sides.size() == b.sides.size());
  for (std::size_t i = 0; i < a.sides.size(); ++i) CHECK(a.sides[i].regime == b.sides[i].regime);
}

TEST_CASE("a finer grid never swaps the two determinate verdicts") {
  const std::vector<std::pair<CoefficientProfile, Interval>> cases{
      {hyperbolic_profile(1.0, 1024, 1.0), Interval::open(-1.2, 1.2)},
      {hyperbolic_profile(4.0, 1024, 1.0), Interval::half_open(0.95, 1.05)},
      {mixed_sign_profile(1024, 0.0, 0.0, -1.0), Interval::half_open(0.995, 1.005)},
      {power_profile(1024, 0.5), Interval::half_open(-1.02, -0.98)}};
  for (const auto& [p, iv] : cases) {
    ClassifierOptions coarse, fine;
    coarse.grid_size = 64;
    fine.grid_size = 128;
    const auto a = classify_regime(p, iv, coarse);
    const auto b = classify_regime(p, iv, fine);
    REQUIRE(a.sides.size() == b.sides.size());
    for (std::size_t i = 0; i < a.sides.size(); ++i) {
      const Regime x = a.sides[i].regime, y = b.sides[i].regime;
      CHECK_FALSE((x == Regime::mean_dominated && y == Regime::noise_dominated));
      CHECK_FALSE((x == Regime::noise_dominated && y == Regime::mean_dominated));
    }
  }
}

TEST_CASE("predictions") {
  const auto centered = power_profile(256, 0.0);
  const Interval iv = Interval::half_open(0.9, 1.1);
  const auto pc = predict_count(centered, iv);
  REQUIRE(pc.value);
  CHECK(*pc.value == kac_rice_interval(centered, iv).total);
  CHECK_FALSE(pc.bounded_error_band);

  const auto large = predict_count(mixed_sign_profile(1024, 0.0, 0.0, -1.0),
                                   Interval::half_open(0.995, 1.005));
  CHECK(large.regime == Regime::mean_dominated);
  CHECK(large.order_one);
  CHECK(large.bounded_error_band);

  // Kac with mean 1 on the full line: the noise-dominated side near -1
  // is counted with the centered profile.
  const auto kac = hyperbolic_profile(1.0, 1024, 1.0);
  const auto mixed = predict_count(kac, Interval::real_line(), ClassifierOptions{}, KacRiceOptions{});
  CHECK(mixed.regime == Regime::mixed);
  REQUIRE(mixed.value);
  CHECK(*mixed.value > 1.0);
  CHECK(*mixed.value < expected_total(kac.centered_copy()).total);
  CHECK(mixed.bounded_error_band);

  ClassifierOptions tight;
  tight.C = 1e6;
  const auto none = predict_count(hyperbolic_profile(4.0, 128, 1.0), Interval::half_open(0.99, 1.01), tight);
  if (none.regime == Regime::indeterminate) CHECK_FALSE(none.value);
}

TEST_CASE("regime names") {
  for (auto r : {Regime::mean_dominated, Regime::noise_dominated, Regime::mixed,
                 Regime::indeterminate}) {
    CHECK(regime_from_string(to_string(r)) == r);
  }
  CHECK_THROWS_AS(regime_from_string("weird"), std::invalid_argument);
}
