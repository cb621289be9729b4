#include "entrex/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace entrex {

EmpiricalDistribution EmpiricalDistribution::from_samples(std::vector<double> samples) {
  EmpiricalDistribution e;
  std::sort(samples.begin(), samples.end());
  e.n_ = static_cast<std::int64_t>(samples.size());
  e.sorted_ = std::move(samples);
  return e;
}

EmpiricalDistribution EmpiricalDistribution::from_counts(std::map<double, std::int64_t> counts) {
  EmpiricalDistribution e;
  e.table_ = true;
  for (const auto& [x, c] : counts) {
    if (c < 0) throw std::invalid_argument("negative count");
    e.n_ += c;
  }
  e.counts_ = std::move(counts);
  return e;
}

double EmpiricalDistribution::mean() const {
  if (n_ == 0) return 0.0;
  double s = 0.0;
  if (table_) {
    for (const auto& [x, c] : counts_) s += x * static_cast<double>(c);
  } else {
    for (double x : sorted_) s += x;
  }
  return s / static_cast<double>(n_);
}

double EmpiricalDistribution::cdf(double x) const {
  if (n_ == 0) return 0.0;
  std::int64_t k = 0;
  if (table_) {
    for (const auto& [v, c] : counts_) {
      if (v > x) break;
      k += c;
    }
  } else {
    k = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
  }
  return static_cast<double>(k) / static_cast<double>(n_);
}

double ks_statistic(const EmpiricalDistribution& emp, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(emp.n());
  if (emp.n() == 0) return 0.0;
  double d = 0.0;
  std::int64_t below = 0;
  auto visit = [&](double v, std::int64_t c) {
    const double F = cdf(v);
    d = std::max(d, std::abs(F - static_cast<double>(below) / n));
    below += c;
    d = std::max(d, std::abs(F - static_cast<double>(below) / n));
  };
  if (emp.is_table()) {
    for (const auto& [v, c] : emp.counts()) visit(v, c);
  } else {
    const auto& s = emp.sorted();
    for (std::size_t i = 0; i < s.size();) {
      std::size_t j = i;
      while (j < s.size() && s[j] == s[i]) ++j;
      visit(s[i], static_cast<std::int64_t>(j - i));
      i = j;
    }
  }
  return d;
}

double ks_critical_value(std::int64_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double t = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 ? 2.0 : -2.0) * t;
    if (t < 1e-17) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

ChiSquareResult chi_square_gof(std::span<const std::int64_t> observed, std::span<const double> probs,
                               std::int64_t off_support) {
  if (observed.size() != probs.size()) throw std::invalid_argument("chi_square_gof: size mismatch");
  ChiSquareResult r;
  std::int64_t n = off_support;
  for (auto c : observed) n += c;
  struct Cell {
    double expected;
    std::int64_t observed;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0)
      cells.push_back({probs[i] * static_cast<double>(n), observed[i]});
    else
      off_support += observed[i];
  }
  r.off_support = off_support;
  if (off_support > 0) {
    r.statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    return r;
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.expected < b.expected; });
  while (cells.size() > 1 && cells.front().expected < 5.0) {
    cells[1].expected += cells[0].expected;
    cells[1].observed += cells[0].observed;
    cells.erase(cells.begin());
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.expected < b.expected; });
  }
  r.cells = static_cast<int>(cells.size());
  r.dof = r.cells - 1;
  for (const auto& c : cells) {
    const double diff = static_cast<double>(c.observed) - c.expected;
    r.statistic += diff * diff / c.expected;
  }
  r.p_value = r.dof <= 0 ? 1.0 : boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic);
  return r;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double median_of_means(std::span<const double> values, int blocks) {
  if (values.empty()) throw std::invalid_argument("median_of_means: no values");
  const std::size_t n = values.size();
  const std::size_t b = std::min<std::size_t>(static_cast<std::size_t>(std::max(blocks, 1)), n);
  const std::size_t size = n / b;
  std::vector<double> means;
  means.reserve(b);
  for (std::size_t k = 0; k < b; ++k) {
    const std::size_t lo = k * size;
    const std::size_t hi = k + 1 == b ? n : lo + size;
    means.push_back(mean_of(values.subspan(lo, hi - lo)));
  }
  std::sort(means.begin(), means.end());
  return b % 2 ? means[b / 2] : 0.5 * (means[b / 2 - 1] + means[b / 2]);
}

double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace entrex
