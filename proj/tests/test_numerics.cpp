#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "entrex/numerics.hpp"
#include "entrex/rational.hpp"

using namespace entrex;

TEST_CASE("parse_rational accepts fractions, integers, decimals") {
  CHECK(parse_rational("2/3") == Rational(2, 3));
  CHECK(parse_rational(" -7 ") == Rational(-7));
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("1.5e-2") == Rational(3, 200));
  CHECK(parse_rational("-0.25/0.5") == Rational(-1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("rational_from_double uses the shortest decimal") {
  CHECK(rational_from_double(0.1) == Rational(1, 10));
  CHECK(rational_from_double(-2.5) == Rational(-5, 2));
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK(to_string(Rational(4)) == "4");
}

TEST_CASE("rational gcd") {
  CHECK(rational_gcd(Rational(1, 2), Rational(1, 3)) == Rational(1, 6));
  CHECK(rational_gcd(Rational(0), Rational(3, 4)) == Rational(3, 4));
  CHECK(rational_gcd(Rational(6), Rational(4)) == Rational(2));
}

TEST_CASE("normal evaluators") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.0) + normal_sf(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  // 2 Phi(1) - 1
  CHECK(half_normal_cdf(1.0) == doctest::Approx(0.6826894921370859).epsilon(1e-14));
  CHECK(half_normal_cdf(0.0) == 0.0);
  CHECK(half_normal_cdf(-1.0) == 0.0);
}

TEST_CASE("adaptive simpson on known integrals") {
  auto r = adaptive_simpson([](double x) { return std::exp(-x); }, 0.0, 5.0, 1e-12);
  CHECK(r.value == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-11));
  // int_0^inf (1 - Phi) = 1/sqrt(2 pi)
  auto t = adaptive_simpson([](double x) { return normal_sf(x); }, 0.0, 40.0, 1e-12);
  CHECK(t.value == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-10));
}

TEST_CASE("bisect_increasing inverts a CDF") {
  const double x = bisect_increasing([](double v) { return normal_cdf(v); }, 0.975, -10.0, 10.0);
  CHECK(x == doctest::Approx(1.959963984540054).epsilon(1e-11));
}

TEST_CASE("alias table frequencies") {
  const std::vector<double> w = {1.0, 2.0, 0.0, 5.0};
  AliasTable t(w);
  RngStream r(3);
  std::vector<int> c(4, 0);
  const int n = 400000;
  for (int i = 0; i < n; ++i) ++c[t.sample(r)];
  CHECK(c[2] == 0);
  for (int i : {0, 1, 3}) {
    const double p = w[static_cast<std::size_t>(i)] / 8.0;
    CHECK(std::abs(c[static_cast<std::size_t>(i)] - n * p) < 5 * std::sqrt(n * p * (1 - p)));
  }
}
