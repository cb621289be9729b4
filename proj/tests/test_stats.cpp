#include "doctest.h"

#include <cmath>

#include "entrex/numerics.hpp"
#include "entrex/stats.hpp"

using namespace entrex;

TEST_CASE("empirical distribution") {
  const auto e = EmpiricalDistribution::from_samples({3.0, 1.0, 2.0, 2.0});
  CHECK(e.n() == 4);
  CHECK(e.mean() == 2.0);
  CHECK(e.cdf(1.999) == 0.25);
  CHECK(e.cdf(2.0) == 0.75);
  const auto t = EmpiricalDistribution::from_counts({{0.0, 3}, {1.0, 1}});
  CHECK(t.is_table());
  CHECK(t.cdf(0.0) == 0.75);
  CHECK(t.mean() == 0.25);
}

TEST_CASE("KS statistic by hand") {
  // F(x) = x on [0,1]; samples 0.1, 0.5: the sup is F_n(0.5) - F(0.5) = 1 - 0.5
  const auto e = EmpiricalDistribution::from_samples({0.1, 0.5});
  const auto F = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_statistic(e, F) == doctest::Approx(0.5));
  CHECK(ks_critical_value(100000) == doctest::Approx(0.00515451).epsilon(1e-5));
  CHECK(kolmogorov_sf(1.63) == doctest::Approx(0.0098).epsilon(0.02));
}

TEST_CASE("KS of a correct sampler stays below the critical value") {
  RngStream rng(5);
  std::vector<double> x(20000);
  for (auto& v : x) v = rng.normal();
  const auto e = EmpiricalDistribution::from_samples(x);
  CHECK(ks_statistic(e, normal_cdf) < ks_critical_value(20000));
  for (auto& v : x) v += 0.1;
  CHECK(ks_statistic(EmpiricalDistribution::from_samples(x), normal_cdf) > ks_critical_value(20000));
}

TEST_CASE("chi-square goodness of fit") {
  const std::vector<std::int64_t> exact = {500, 500};
  const std::vector<double> half = {0.5, 0.5};
  const auto r = chi_square_gof(exact, half);
  CHECK(r.statistic == 0.0);
  CHECK(r.dof == 1);
  CHECK(r.p_value == doctest::Approx(1.0));
  const std::vector<std::int64_t> skew = {600, 400};
  const auto s = chi_square_gof(skew, half);
  CHECK(s.statistic == doctest::Approx(40.0));
  CHECK(s.p_value < 1e-8);
  CHECK(chi_square_gof(exact, half, 1).p_value == 0.0);
  // tiny cells are pooled
  const std::vector<std::int64_t> obs = {990, 5, 5};
  const std::vector<double> probs = {0.99, 0.001, 0.009};
  CHECK(chi_square_gof(obs, probs).cells == 2);
}

TEST_CASE("total variation, median of means, moments") {
  const std::vector<double> p = {0.5, 0.5, 0.0}, q = {0.25, 0.25, 0.5};
  CHECK(total_variation(p, q) == 0.5);
  std::vector<double> v(1000, 1.0);
  v[3] = 1e9;  // one outlier spoils only one block
  CHECK(median_of_means(v, 100) == 1.0);
  const std::vector<double> u = {1.0, 2.0, 3.0, 4.0};
  CHECK(mean_of(u) == 2.5);
  CHECK(stddev_of(u) == doctest::Approx(std::sqrt(5.0 / 3.0)));
}
