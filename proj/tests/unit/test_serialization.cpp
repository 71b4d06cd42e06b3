#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "randpoly/comparison.hpp"
#include "randpoly/ensembles.hpp"
#include "randpoly/kacrice.hpp"
#include "randpoly/montecarlo.hpp"
#include "randpoly/serialization.hpp"

using namespace randpoly;
using nlohmann::json;

TEST_CASE("shortest round-trip formatting") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0, 123456789.0}) {
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(kInfinity) == "inf");
  CHECK(format_double(-kInfinity) == "-inf");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("profile documents round-trip") {
  for (const auto& p : {hyperbolic_profile(2.7, 40, 0.3), mixed_sign_profile(17, 0.2, 0.1, -0.4),
                        derivative_profile(power_profile(30, 0.5, 1.0, 0.25), 2)}) {
    const json j = json::parse(profile_to_json(p).dump());
    CHECK(j.at("n") == p.degree());
    const auto q = profile_from_json(j);
    CHECK(q == p);
    CHECK(q.id() == p.id());
  }
  const auto det = profile_from_json(json{{"rho", 0.0}, {"b", {1, 2}}, {"c", {0, 0}}});
  CHECK_FALSE(det.random());
  CHECK_THROWS(profile_from_json(json{{"n", 3}, {"rho", 0.0}, {"b", {1, 2}}, {"c", {1, 1}}}));
}

TEST_CASE("Kac-Rice results round-trip") {
  const auto r = kac_rice_interval(hyperbolic_profile(1, 20, 1), Interval::half_open(-0.5, 2.0));
  const json j = json::parse(json(r).dump());
  for (const char* key : {"i1", "i2", "total", "err", "interval", "profile_id"}) CHECK(j.contains(key));
  const auto back = j.get<KacRiceResult>();
  CHECK(back.total == r.total);
  CHECK(back.i2 == r.i2);
  CHECK(back.interval == r.interval);
  CHECK(back.profile_id == r.profile_id);
}

TEST_CASE("regime reports round-trip without the grid") {
  const auto r = classify_regime(hyperbolic_profile(1, 512, 1), Interval::open(-1.1, 1.1));
  const auto back = json::parse(json(r).dump()).get<RegimeReport>();
  CHECK(back.regime == r.regime);
  CHECK(back.enlarged == r.enlarged);
  REQUIRE(back.sides.size() == r.sides.size());
  for (std::size_t i = 0; i < r.sides.size(); ++i) {
    CHECK(back.sides[i].regime == r.sides[i].regime);
    CHECK(back.sides[i].epsilon == r.sides[i].epsilon);
    CHECK(back.sides[i].min_margin == r.sides[i].min_margin);
    CHECK(back.sides[i].grid.empty());
  }
}

TEST_CASE("statistics round-trip, CSV rows") {
  TrialStatistics s;
  s.mean = 1.25;
  s.variance = 0.5;
  s.std_error = 0.01;
  s.ci_lo = 1.2304;
  s.ci_hi = 1.2696;
  s.trials = 5000;
  s.discarded = 2;
  const json j = json::parse(json(s).dump());
  CHECK(j.at("stderr") == 0.01);
  CHECK(j.get<TrialStatistics>() == s);
  CHECK(trial_statistics_csv_header() == "n,trials,mean,stderr,ci_lo,ci_hi,discarded");
  CHECK(to_csv_row(64, s) == "64,5000,1.25,0.01,1.2304,1.2696,2");

  TrialStatistics odd;
  odd.mean = std::numeric_limits<double>::quiet_NaN();
  odd.ci_hi = kInfinity;
  const auto back = json::parse(json(odd).dump()).get<TrialStatistics>();
  CHECK(std::isnan(back.mean));
  CHECK(back.ci_hi == kInfinity);

  SlopeFit f{0.63, 1.1, 0.99, 0.01, true};
  CHECK(json::parse(json(f).dump()).get<SlopeFit>() == f);
}

TEST_CASE("noise and interval documents") {
  const NoiseSpec n{NoiseFamily::two_point, 0.5};
  CHECK(json(n).get<NoiseSpec>() == n);
  const Interval iv{-kInfinity, 3.5, false, true};
  CHECK(json(iv) == "(-inf, 3.5]");
  CHECK(json(iv).get<Interval>() == iv);
}
