#include <catch_amalgamated.hpp>

#include "randpoly/interval.hpp"

using namespace randpoly;

TEST_CASE("default interval is half-open") {
  const Interval iv = Interval::half_open(1.0, 2.0);
  CHECK(iv.contains(1.0));
  CHECK_FALSE(iv.contains(2.0));
  CHECK_FALSE(iv.empty());
  CHECK(Interval::closed(3.0, 3.0).contains(3.0));
  CHECK(Interval::half_open(3.0, 3.0).empty());
  CHECK(Interval::open(2.0, 1.0).empty());
}

TEST_CASE("intersection keeps the tighter endpoint and its closure") {
  const auto r = intersect(Interval::closed(0.0, 2.0), Interval::open(1.0, 3.0));
  REQUIRE(r);
  CHECK(*r == Interval{1.0, 2.0, false, true});

  const auto same = intersect(Interval::closed(0.0, 1.0), Interval::half_open(0.0, 1.0));
  REQUIRE(same);
  CHECK(same->lo_closed);
  CHECK_FALSE(same->hi_closed);

  CHECK_FALSE(intersect(Interval::half_open(0.0, 1.0), Interval::half_open(1.0, 2.0)));
  CHECK(intersect(Interval::closed(0.0, 1.0), Interval::closed(1.0, 2.0)));
}

TEST_CASE("text form round-trips, including infinities") {
  for (const Interval& iv : {Interval::half_open(-0.1, 0.3), Interval::real_line(),
                             Interval::closed(1.0 / 3.0, 2.0), Interval{-kInfinity, -2.0, false, true}}) {
    CHECK(parse_interval(to_string(iv)) == iv);
  }
  CHECK(parse_interval("R") == Interval::real_line());
  CHECK(parse_interval(" [1,2) ") == Interval::half_open(1.0, 2.0));
  // Infinite endpoints are open whatever bracket is written.
  CHECK_FALSE(parse_interval("[-inf, 0]").lo_closed);
}

TEST_CASE("malformed intervals are rejected") {
  CHECK_THROWS_AS(parse_interval("1, 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_interval("[a, 2)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_interval("[3, 2)"), std::invalid_argument);
}

TEST_CASE("interval sets") {
  const auto set = parse_interval_set("[-0.5, 0.5] U (-inf, -2] U [2, inf)");
  REQUIRE(set.size() == 3);
  CHECK(set[0] == Interval::closed(-0.5, 0.5));
  CHECK(set[1] == (Interval{-kInfinity, -2.0, false, true}));
  CHECK(parse_interval_set(to_string(set)) == set);
  CHECK_THROWS_AS(parse_interval_set("[0, 2) U [1, 3)"), std::invalid_argument);
}
