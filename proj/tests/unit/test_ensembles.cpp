#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "randpoly/ensembles.hpp"

using namespace randpoly;
using Catch::Approx;

TEST_CASE("profile constructor validation") {
  CHECK_THROWS_AS(CoefficientProfile({1, 2}, {1}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientProfile({}, {}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientProfile({0, 0}, {0, 0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientProfile({0, NAN}, {1, 1}, 0.0), std::invalid_argument);
  CHECK_NOTHROW(CoefficientProfile::degenerate({1, 2}, {0, 0}));
  const CoefficientProfile p({1, 2, 3}, {1, -1, 2}, 0.0);
  CHECK(p.degree() == 2);
  CHECK(p.reciprocal().means() == std::vector<double>{3, 2, 1});
  CHECK(p.reciprocal().reciprocal() == p);
  CHECK(p.centered_copy().centered());
  CHECK(p.scaled(2.0).sigmas() == std::vector<double>{2, -2, 4});
  CHECK(p.id() == CoefficientProfile({1, 2, 3}, {1, -1, 2}, 0.0).id());
  CHECK(p.id() != p.reciprocal().id());
}

TEST_CASE("hyperbolic profile") {
  const auto kac = hyperbolic_profile(1.0, 20, 0.0);
  for (double c : kac.sigmas()) CHECK(c == Approx(1.0).epsilon(1e-15));
  CHECK(kac.rho() == 0.0);
  CHECK(hyperbolic_profile(2.0, 5, 0.0).sigma(3) == Approx(2.0).epsilon(1e-14));
  const auto kac_mean = hyperbolic_profile(1.0, 9, 1.0);
  for (double b : kac_mean.means()) CHECK(b == Approx(1.0));
  CHECK(hyperbolic_profile(5.0, 3, 0.0).rho() == 2.0);
  CHECK_THROWS_AS(hyperbolic_profile(0.0, 3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hyperbolic_profile(-1.0, 3, 0.0), std::invalid_argument);
  // Large n stays finite.
  const auto big = hyperbolic_profile(3.0, 1'000'000, 0.0);
  CHECK(std::isfinite(big.sigma(1'000'000)));
}

TEST_CASE("hyperbolic ratio identity") {
  for (double L : {0.1, 0.5, 1.0, 2.5, 7.0, 50.0}) {
    const auto p = hyperbolic_profile(L, 2000, 0.0);
    for (std::size_t j = 0; j < 2000; ++j) {
      const double r = p.sigma(j + 1) * p.sigma(j + 1) / (p.sigma(j) * p.sigma(j));
      const double want = (L + static_cast<double>(j)) / static_cast<double>(j + 1);
      REQUIRE(std::abs(r / want - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("hyperbolic weights") {
  CHECK(hyperbolic_weight(1.0, 7) == Approx(1.0).epsilon(1e-15));
  CHECK(hyperbolic_weight(2.0, 3) == Approx(4.0).epsilon(1e-14));
  CHECK(hyperbolic_weight(0.5, 0) == 1.0);
  CHECK(std::exp(log_hyperbolic_weight(3.0, 4)) == Approx(15.0).epsilon(1e-13));
}

TEST_CASE("power profile") {
  const auto p = power_profile(10, 0.0);
  CHECK(p.centered());
  for (double c : p.sigmas()) CHECK(c == 1.0);
  CHECK(power_profile(10, 0.5).sigma(3) == Approx(2.0).epsilon(1e-15));
  CHECK(power_profile(10, 0.5, 2.0, 1.0).mean(3) == Approx(8.0));
  CHECK_THROWS_AS(power_profile(10, -0.6), std::invalid_argument);
  CHECK_THROWS_AS(power_profile(10, -0.5), std::invalid_argument);
}

TEST_CASE("mixed-sign profile") {
  const auto p = mixed_sign_profile(10, 0.0, 0.0, -1.0);
  CHECK(p.mean(2) == Approx(1.0));
  CHECK(p.mean(3) == Approx(0.25));
  CHECK_THROWS_AS(mixed_sign_profile(10, 0.0, -0.6, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(mixed_sign_profile(10, 0.0, 0.1, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(mixed_sign_profile(10, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("derivative profile") {
  const auto kac = hyperbolic_profile(1.0, 10, 1.0);
  CHECK(derivative_profile(kac, 0) == kac);
  const auto d1 = derivative_profile(kac, 1);
  CHECK(d1.degree() == 9);
  CHECK(d1.sigma(0) == 1.0);
  CHECK(d1.sigma(2) == 3.0);
  CHECK(d1.mean(2) == 3.0);
  CHECK(d1.rho() == 1.0);
  CHECK_THROWS_AS(derivative_profile(kac, 11), std::invalid_argument);
  CHECK(derivative_profile(kac, 10).degree() == 0);
}

TEST_CASE("derivative composition") {
  for (const auto& p : {hyperbolic_profile(2.5, 200, 0.7), power_profile(100, 0.3, 1.0, 0.1)}) {
    const auto twice = derivative_profile(derivative_profile(p, 1), 1);
    const auto once = derivative_profile(p, 2);
    REQUIRE(twice.degree() == once.degree());
    for (std::size_t j = 0; j <= once.degree(); ++j) {
      REQUIRE(twice.sigma(j) == Approx(once.sigma(j)).epsilon(1e-12));
      REQUIRE(twice.mean(j) == Approx(once.mean(j)).epsilon(1e-12));
    }
    // Beyond the product range the falling factorial goes through lgamma.
    const auto deep = derivative_profile(p, 40);
    const auto stepped = derivative_profile(derivative_profile(p, 20), 20);
    for (std::size_t j = 0; j <= deep.degree(); j += 7) {
      REQUIRE(deep.sigma(j) == Approx(stepped.sigma(j)).epsilon(1e-10));
    }
  }
}

TEST_CASE("generalized coefficients") {
  const GeneralizedTerm kac[] = {{1, 1}};
  const GeneralizedTerm l2[] = {{1, 2}};
  const GeneralizedTerm mix[] = {{2, 1}, {1, 2}};
  CHECK(generalized_coefficient(kac, 7) == Approx(1.0));
  CHECK(generalized_coefficient(l2, 3) == Approx(4.0));
  CHECK(generalized_coefficient(mix, 3) == Approx(6.0));
  CHECK(generalized_degree(mix) == 1.0);
  CHECK_THROWS_AS(generalized_coefficient({}, 3), std::invalid_argument);
  const GeneralizedTerm bad[] = {{1, 0}};
  CHECK_THROWS_AS(generalized_coefficient(bad, 3), std::invalid_argument);
}

TEST_CASE("growth condition validator") {
  const auto pw = validate_condition(power_profile(1024, 0.5));
  CHECK(pw.passes);
  CHECK(pw.fitted_rho == Approx(0.5).margin(1e-9));

  std::vector<double> b(41, 0.0), c(41);
  for (std::size_t j = 0; j <= 40; ++j) c[j] = std::ldexp(1.0, static_cast<int>(j));
  CHECK_FALSE(validate_condition(CoefficientProfile(b, c, 0.0)).passes);

  const auto h3 = validate_condition(hyperbolic_profile(3.0, 1024, 0.0));
  CHECK(h3.passes);
  CHECK(h3.fitted_rho == Approx(1.0).margin(0.05));

  for (const auto& p : {hyperbolic_profile(0.5, 512, 1.0), hyperbolic_profile(4.0, 512, 1.0),
                        power_profile(512, 1.5, 1.0, 1.0), mixed_sign_profile(512, 0.0, 0.0, -1.0),
                        mixed_sign_profile(512, 1.0, 0.8, 0.0)}) {
    const auto r = validate_condition(p);
    INFO(p.family_tag() << " rho " << p.rho() << " fitted " << r.fitted_rho);
    CHECK(r.passes);
    CHECK(r.lower_constant > 0.0);
    CHECK(r.fitted_rho > -0.5);
  }
  CHECK_THROWS_AS(validate_condition(power_profile(10, 0.0)), std::invalid_argument);
}

TEST_CASE("sampling") {
  const auto det = CoefficientProfile::degenerate({1, 2}, {0, 0});
  CHECK(sample(det, NoiseSpec{}, 1, 0).coeffs == std::vector<double>{1, 2});

  const auto p = hyperbolic_profile(2.0, 30, 0.5);
  const auto a = sample(p, NoiseSpec{}, 77, 3);
  const auto b = sample(p, NoiseSpec{}, 77, 3);
  CHECK(a.coeffs == b.coeffs);
  CHECK(a.seed == 77);
  CHECK(a.trial == 3);
  CHECK(a.profile_id == p.id());
  CHECK(sample(p, NoiseSpec{}, 77, 4).coeffs != a.coeffs);

  std::vector<double> out;
  REQUIRE(sample_into(p, NoiseSpec{}, 77, 3, out));
  CHECK(out == a.coeffs);

  const auto kac1 = power_profile(1, 0.0);
  std::set<std::vector<double>> seen;
  for (std::uint64_t t = 0; t < 200; ++t) {
    seen.insert(sample(kac1, NoiseSpec{NoiseFamily::rademacher, 0.0}, 5, t).coeffs);
  }
  CHECK(seen == std::set<std::vector<double>>{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}});
}

TEST_CASE("zero draws are rejected") {
  // b = c = 1 with Rademacher innovations gives a_j in {0, 2}: the zero
  // vector has probability 1/4 at degree 1.
  const CoefficientProfile p({1.0, 1.0}, {1.0, 1.0}, 0.0);
  const NoiseSpec rad{NoiseFamily::rademacher, 0.0};
  int zeros = 0;
  std::vector<double> out;
  for (std::uint64_t t = 0; t < 400; ++t) {
    if (!sample_into(p, rad, 9, t, out)) {
      ++zeros;
      CHECK_THROWS_AS(sample(p, rad, 9, t), ZeroSampleError);
    }
  }
  CHECK(zeros > 60);
  CHECK(zeros < 140);
}

TEST_CASE("sample moments of one coefficient") {
  const auto p = CoefficientProfile({0.0, 1.5}, {1.0, 2.0}, 0.0);
  const int m = 100000;
  for (auto f : {NoiseFamily::gaussian, NoiseFamily::rademacher, NoiseFamily::uniform,
                 NoiseFamily::two_point}) {
    std::vector<double> out;
    double s = 0, s2 = 0;
    for (int t = 0; t < m; ++t) {
      REQUIRE(sample_into(p, NoiseSpec{f, 0.0}, 31, static_cast<std::uint64_t>(t), out));
      s += out[1];
      s2 += out[1] * out[1];
    }
    const double mean = s / m, var = s2 / m - mean * mean;
    INFO(to_string(f));
    CHECK(std::abs(mean - 1.5) <= 4.0 * 2.0 / std::sqrt(m));
    CHECK(var == Approx(4.0).epsilon(0.05));
  }
}
