#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "entrex/parallel.hpp"
#include "entrex/rng.hpp"

using namespace entrex;

TEST_CASE("same seed, same stream") {
  RngStream a(123), b(123);
  for (int i = 0; i < 1000; ++i) CHECK(a.bits() == b.bits());
}

TEST_CASE("copies replay, splits diverge") {
  RngStream a(7);
  RngStream copy = a;
  CHECK(a.bits() == copy.bits());
  const RngStream root(7);
  CHECK(root.split(0).seed() != root.split(1).seed());
  CHECK(root.split("x").seed() == root.split("x").seed());
  CHECK(root.split("x").seed() != root.split("y").seed());
  // split depends on (seed, index) only, not on how far the parent has advanced
  RngStream advanced(7);
  for (int i = 0; i < 10; ++i) advanced.bits();
  CHECK(advanced.split(3).seed() == root.split(3).seed());
}

TEST_CASE("derived seeds are distinct across a block grid") {
  std::set<std::uint64_t> seen;
  const RngStream root(42);
  for (std::uint64_t i = 0; i < 200; ++i)
    for (std::uint64_t j = 0; j < 50; ++j) seen.insert(root.split(i).split(j).seed());
  CHECK(seen.size() == 200u * 50u);
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("uniform ranges and moments") {
  RngStream r(99);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double v = r.uniform_open();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
    sum += u;
    sum2 += u * u;
  }
  CHECK(std::abs(sum / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(sum2 / n - 1.0 / 3) < 0.005);
}

TEST_CASE("below is unbiased over a small range") {
  RngStream r(5);
  std::vector<int> counts(6, 0);
  const int n = 600000;
  for (int i = 0; i < n; ++i) ++counts[r.below(6)];
  for (int c : counts) CHECK(std::abs(c - n / 6) < 5 * std::sqrt(n / 6.0));
}

TEST_CASE("normal moments") {
  RngStream r(11);
  const int n = 400000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  CHECK(std::abs(s1 / n) < 5 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1.0) < 5 * std::sqrt(2.0 / n));
  CHECK(std::abs(s4 / n - 3.0) < 5 * std::sqrt(96.0 / n));
}

TEST_CASE("run_blocks returns results in block order for any worker count") {
  auto f = [](std::size_t b) {
    RngStream r = RngStream(1).split(b);
    double s = 0;
    for (int i = 0; i < 1000; ++i) s += r.uniform();
    return s;
  };
  const auto one = run_blocks(37, 1, f);
  const auto four = run_blocks(37, 4, f);
  CHECK(one == four);
}

TEST_CASE("run_blocks rethrows") {
  CHECK_THROWS_AS(run_blocks(5, 2,
                             [](std::size_t b) {
                               if (b == 3) throw std::runtime_error("boom");
                               return 0;
                             }),
                  std::runtime_error);
}
