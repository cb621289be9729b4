#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace entrex {

/// Sorted samples (continuous) or a count table (lattice).
class EmpiricalDistribution {
 public:
  static EmpiricalDistribution from_samples(std::vector<double> samples);
  static EmpiricalDistribution from_counts(std::map<double, std::int64_t> counts);

  std::int64_t n() const noexcept { return n_; }
  bool is_table() const noexcept { return table_; }
  const std::vector<double>& sorted() const noexcept { return sorted_; }
  const std::map<double, std::int64_t>& counts() const noexcept { return counts_; }
  double mean() const;
  /// Fraction of samples <= x.
  double cdf(double x) const;

 private:
  bool table_ = false;
  std::int64_t n_ = 0;
  std::vector<double> sorted_;
  std::map<double, std::int64_t> counts_;
};

/// sup_x |F_n(x) - F(x)| for a continuous target CDF, evaluated exactly at
/// the jumps of F_n (ties handled by comparing both one-sided limits).
double ks_statistic(const EmpiricalDistribution& emp, const std::function<double(double)>& cdf);
/// Large-sample two-sided critical value 1.63 / sqrt(n) (alpha ~ 0.01).
double ks_critical_value(std::int64_t n);
/// Asymptotic Kolmogorov survival function P(K > lambda).
double kolmogorov_sf(double lambda);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int cells = 0;           // after pooling
  std::int64_t off_support = 0;  // observations in zero-probability cells
};

/// Multinomial goodness of fit of `observed` counts against `probs`. Cells with
/// expected count below 5 are pooled, smallest first. Observations outside the
/// support of `probs` make the test fail (p = 0).
ChiSquareResult chi_square_gof(std::span<const std::int64_t> observed, std::span<const double> probs,
                               std::int64_t off_support = 0);

/// 1/2 sum |p - q|.
double total_variation(std::span<const double> p, std::span<const double> q);

/// Median of the means of `blocks` contiguous, equal-size blocks (the last
/// block absorbs the remainder).
double median_of_means(std::span<const double> values, int blocks = 100);

double mean_of(std::span<const double> v);
/// Sample standard deviation.
double stddev_of(std::span<const double> v);

}  // namespace entrex
