#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "entrex/rng.hpp"

namespace entrex {

inline double normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Phi(x), accurate in both tails.
inline double normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// 1 - Phi(x) without cancellation.
inline double normal_sf(double x) noexcept {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

/// CDF of |N(0,1)|: 2 Phi(y) - 1 for y >= 0.
inline double half_normal_cdf(double y) noexcept {
  return y <= 0.0 ? 0.0 : std::erf(y / std::numbers::sqrt2);
}

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double tol = 1e-10,
                                  int max_depth = 48);

/// Smallest x in [lo, hi] with f(x) >= target for nondecreasing f.
double bisect_increasing(const std::function<double(double)>& f, double target,
                         double lo, double hi, double x_tol = 1e-13,
                         int max_iter = 200);

/// Walker/Vose alias table over a finite set of weights.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const noexcept { return prob_.size(); }

  std::size_t sample(RngStream& rng) const noexcept {
    const double u = rng.uniform() * static_cast<double>(prob_.size());
    auto i = static_cast<std::size_t>(u);
    if (i >= prob_.size()) i = prob_.size() - 1;
    return (u - static_cast<double>(i)) < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

}  // namespace entrex
