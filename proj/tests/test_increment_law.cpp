#include "doctest.h"

#include <cmath>
#include <numbers>

#include "entrex/increment_law.hpp"

using namespace entrex;

namespace {

IncrementLaw law_of(std::initializer_list<std::pair<const char*, const char*>> entries) {
  std::vector<LatticeEntry> e;
  for (auto [x, p] : entries) e.push_back({{parse_rational(x)}, parse_rational(p)});
  return IncrementLaw::lattice(std::move(e));
}

}  // namespace

TEST_CASE("Rademacher law") {
  const auto law = law_of({{"-1", "1/2"}, {"1", "1/2"}});
  CHECK(law.span() == 1.0);
  CHECK(law.mean()[0] == 0.0);
  CHECK(law.sigma2() == 1.0);
  CHECK(law.abs_first_moment() == 1.0);
  CHECK(law.tail_gt(0.0) == 0.5);
  CHECK(law.describe() == "lattice{-1:1/2, 1:1/2}");
}

TEST_CASE("two-thirds law {-1:2/3, +2:1/3}") {
  const auto law = law_of({{"-1", "2/3"}, {"2", "1/3"}});
  CHECK(law.span() == 1.0);
  CHECK(std::abs(law.mean()[0]) < 1e-15);
  CHECK(law.sigma2() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(law.abs_first_moment() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(law.tail_gt(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(has_zero_mean_finite_variance(law));
}

TEST_CASE("degenerate and malformed lattice laws are rejected") {
  CHECK_THROWS_AS(law_of({{"0", "1"}}), LawError);
  CHECK_THROWS_AS(law_of({{"-1", "-1/2"}, {"1", "3/2"}}), LawError);
  CHECK_THROWS_AS(law_of({{"-1", "1/2"}, {"1", "1/3"}}), LawError);
  // merged duplicates collapse to a single atom
  CHECK_THROWS_AS(law_of({{"1", "1/2"}, {"1", "1/2"}}), LawError);
}

TEST_CASE("span is the gcd of the support") {
  const auto law = law_of({{"-1/2", "1/2"}, {"3/2", "1/4"}, {"-1/2", "1/4"}});
  CHECK(law.span() == 0.5);
  const auto even = law_of({{"-2", "1/2"}, {"4", "1/4"}, {"0", "1/4"}});
  CHECK(even.span() == 2.0);
  CHECK(even.space().haar_unit == 2.0);
  double x = 6.0;
  CHECK(even.space().contains(std::span<const double>(&x, 1)));
  x = 3.0;
  CHECK_FALSE(even.space().contains(std::span<const double>(&x, 1)));
}

TEST_CASE("two-dimensional simple walk state space") {
  std::vector<LatticeEntry> e;
  for (auto [a, b] : {std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}})
    e.push_back({{Rational(a), Rational(b)}, Rational(1, 4)});
  const auto law = IncrementLaw::lattice(e);
  CHECK(law.dim() == 2);
  CHECK(law.space().haar_unit == 1.0);
  const Point zero{0.0, 0.0}, x10{1.0, 0.0};
  CHECK(law.cdf_le(zero) == 0.5);
  CHECK(law.cdf_le(x10) == 0.75);
  // strict in both coordinates: only (1,0) and (0,1) qualify
  CHECK(law.tail_gt(Point{-1.0, -1.0}) == 0.5);
}

TEST_CASE("checkerboard support generates a proper sublattice") {
  std::vector<LatticeEntry> e;
  for (auto [a, b] : {std::pair{1, 1}, std::pair{-1, -1}, std::pair{1, -1}, std::pair{-1, 1}})
    e.push_back({{Rational(a), Rational(b)}, Rational(1, 4)});
  const auto law = IncrementLaw::lattice(e);
  CHECK(law.space().haar_unit == 2.0);
  CHECK(law.space().contains(Point{2.0, 0.0}));
  CHECK_FALSE(law.space().contains(Point{1.0, 0.0}));
}

TEST_CASE("continuous laws: closed-form moments") {
  const auto g = IncrementLaw::gaussian(1.0);
  CHECK(g.span() == 0.0);
  CHECK(g.sigma2() == 1.0);
  CHECK(g.abs_first_moment() == doctest::Approx(0.7978845608).epsilon(1e-10));
  CHECK(g.tail_gt(0.0) == 0.5);
  const auto u = IncrementLaw::uniform(-1.0, 1.0);
  CHECK(u.sigma2() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(u.abs_first_moment() == doctest::Approx(0.5).epsilon(1e-15));
  const auto l = IncrementLaw::laplace(1.0);
  CHECK(l.sigma2() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(l.abs_first_moment() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(IncrementLaw::gaussian(0.0), LawError);
  CHECK_THROWS_AS(IncrementLaw::laplace(-1.0), LawError);
  CHECK_THROWS_AS(IncrementLaw::uniform(1.0, 1.0), LawError);
}

TEST_CASE("tail and cdf are complementary") {
  const IncrementLaw laws[] = {law_of({{"-1", "2/3"}, {"2", "1/3"}}), IncrementLaw::gaussian(1.3),
                               IncrementLaw::laplace(0.7), IncrementLaw::uniform(-2.0, 1.0)};
  for (const auto& law : laws)
    for (double x = -3.0; x <= 3.0; x += 0.25) CHECK(law.tail_gt(x) + law.cdf_le(x) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("integrated tails match quadrature of the tail") {
  for (const auto& law : {IncrementLaw::gaussian(1.0), IncrementLaw::laplace(2.0), IncrementLaw::uniform(-1.0, 3.0)}) {
    const auto up = adaptive_simpson([&](double t) { return law.tail_gt(t); }, 0.0, 1.7, 1e-12);
    CHECK(law.integrated_tail(1.7) == doctest::Approx(up.value).epsilon(1e-9));
    const auto lo = adaptive_simpson([&](double t) { return law.cdf_le(t); }, -0.9, 0.0, 1e-12);
    CHECK(law.integrated_lower(-0.9) == doctest::Approx(lo.value).epsilon(1e-9));
  }
}

TEST_CASE("sampler mean within 5 standard errors over 10^6 draws") {
  const IncrementLaw laws[] = {law_of({{"-1", "2/3"}, {"2", "1/3"}}), law_of({{"-1", "1/2"}, {"1", "1/2"}}),
                               IncrementLaw::gaussian(1.0), IncrementLaw::laplace(1.0),
                               IncrementLaw::uniform(-1.0, 1.0)};
  RngStream rng(2024);
  const int n = 1000000;
  for (const auto& law : laws) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += law.sample_scalar(rng);
    CHECK(std::abs(s / n - law.mean()[0]) < 5.0 * std::sqrt(law.sigma2() / n));
  }
}

TEST_CASE("lattice samples stay on the lattice") {
  const auto law = law_of({{"-1/2", "1/2"}, {"3/2", "1/4"}, {"1/2", "1/4"}});
  RngStream rng(8);
  for (int i = 0; i < 1000; ++i) {
    const double x = law.sample_scalar(rng);
    CHECK(std::abs(x / 0.5 - std::round(x / 0.5)) < 1e-12);
  }
}
