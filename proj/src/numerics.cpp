#include "entrex/numerics.hpp"

#include <numeric>
#include <stdexcept>

namespace entrex {

namespace {

struct Panel {
  double a, m, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

void refine(const std::function<double(double)>& f, const Panel& p, double tol,
            int depth, QuadratureResult& out) {
  const double lm = 0.5 * (p.a + p.m), rm = 0.5 * (p.m + p.b);
  const double flm = f(lm), frm = f(rm);
  out.evaluations += 2;
  const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
  const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    out.value += left + right + delta / 15.0;
    out.error_estimate += std::abs(delta) / 15.0;
    return;
  }
  refine(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1, out);
  refine(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1, out);
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double tol, int max_depth) {
  QuadratureResult out;
  if (a == b) return out;
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);
  // Start from a few panels so narrow features are not skipped entirely.
  constexpr int kPanels = 8;
  const double width = (b - a) / kPanels;
  for (int k = 0; k < kPanels; ++k) {
    const double pa = a + k * width;
    const double pb = k + 1 == kPanels ? b : pa + width;
    const double pm = 0.5 * (pa + pb);
    const double fa = f(pa), fm = f(pm), fb = f(pb);
    out.evaluations += 3;
    refine(f, {pa, pm, pb, fa, fm, fb, simpson(pa, pb, fa, fm, fb)}, tol / kPanels,
           max_depth, out);
  }
  out.value *= sign;
  return out;
}

double bisect_increasing(const std::function<double(double)>& f, double target,
                         double lo, double hi, double x_tol, int max_iter) {
  if (!(lo <= hi)) throw std::invalid_argument("bisect_increasing: empty bracket");
  for (int i = 0; i < max_iter && hi - lo > x_tol * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("AliasTable: no weights");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("AliasTable: zero total weight");
  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("AliasTable: negative weight");
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::size_t i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  for (std::size_t i : small) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
}

}  // namespace entrex
