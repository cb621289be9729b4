#include "entrex/increment_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace entrex {

namespace {

std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw LawError("lattice coordinate out of 64-bit range");
  return v.convert_to<std::int64_t>();
}

struct ExtGcd {
  std::int64_t g, x, y;
};

ExtGcd ext_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

// Row-echelon basis of the subgroup of Z^d generated by `rows`, with positive
// pivots on the diagonal. Throws if the subgroup is not of full rank.
std::vector<LatticePoint> echelon_basis(std::vector<LatticePoint> rows, int d) {
  std::vector<LatticePoint> basis;
  for (int col = 0; col < d; ++col) {
    std::optional<LatticePoint> pivot;
    std::vector<LatticePoint> rest;
    for (auto& r : rows) {
      if (r[col] == 0) {
        rest.push_back(std::move(r));
        continue;
      }
      if (!pivot) {
        pivot = std::move(r);
        continue;
      }
      const std::int64_t a = (*pivot)[col], b = r[col];
      const auto [g, x, y] = ext_gcd(a, b);
      LatticePoint np(d), nr(d);
      for (int k = 0; k < d; ++k) {
        np[k] = x * (*pivot)[k] + y * r[k];
        nr[k] = (b / g) * (*pivot)[k] - (a / g) * r[k];
      }
      pivot = std::move(np);
      if (std::any_of(nr.begin(), nr.end(), [](std::int64_t v) { return v != 0; }))
        rest.push_back(std::move(nr));
    }
    if (!pivot) throw LawError("support does not generate a full-dimensional lattice");
    if ((*pivot)[col] < 0)
      for (auto& v : *pivot) v = -v;
    basis.push_back(std::move(*pivot));
    rows = std::move(rest);
  }
  // Reduce above-diagonal entries so the basis is canonical (Hermite form).
  for (int col = 1; col < d; ++col)
    for (int row = 0; row < col; ++row) {
      const std::int64_t p = basis[col][col];
      std::int64_t q = basis[row][col] / p;
      if (basis[row][col] - q * p < 0) --q;
      if (q != 0)
        for (int k = 0; k < d; ++k) basis[row][k] -= q * basis[col][k];
    }
  return basis;
}

double uniform_tail_integral(double lo, double hi, double a, double b) {
  // int_lo^hi P(X > t) dt for X ~ U(a, b), lo <= hi.
  double total = 0.0;
  if (lo < a) total += std::min(hi, a) - lo;
  const double s = std::max(lo, a), e = std::min(hi, b);
  if (s < e) {
    auto prim = [&](double t) { return (b * t - 0.5 * t * t) / (b - a); };
    total += prim(e) - prim(s);
  }
  return total;
}

double uniform_lower_integral(double lo, double hi, double a, double b) {
  // int_lo^hi P(X <= t) dt for X ~ U(a, b), lo <= hi.
  double total = 0.0;
  if (hi > b) total += hi - std::max(lo, b);
  const double s = std::max(lo, a), e = std::min(hi, b);
  if (s < e) {
    auto prim = [&](double t) { return (0.5 * t * t - a * t) / (b - a); };
    total += prim(e) - prim(s);
  }
  return total;
}

void require_positive_finite(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw LawError(std::string(name) + " must be positive and finite");
}

}  // namespace

std::optional<LatticePoint> StateSpace::to_units(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) return std::nullopt;
  LatticePoint units(dim);
  for (int i = 0; i < dim; ++i) {
    const double k = std::round(x[i] / span[i]);
    if (std::abs(k * span[i] - x[i]) > 1e-9 * std::max(1.0, std::abs(x[i]))) return std::nullopt;
    units[i] = static_cast<std::int64_t>(k);
  }
  if (!contains_units(units)) return std::nullopt;
  return units;
}

bool StateSpace::contains_units(std::span<const std::int64_t> units) const {
  if (basis.empty()) return true;
  LatticePoint v(units.begin(), units.end());
  for (int col = 0; col < dim; ++col) {
    const std::int64_t p = basis[col][col];
    if (v[col] % p != 0) return false;
    const std::int64_t q = v[col] / p;
    for (int k = col; k < dim; ++k) v[k] -= q * basis[col][k];
  }
  return true;
}

Point StateSpace::to_point(std::span<const std::int64_t> units) const {
  Point p(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) p[i] = static_cast<double>(units[i]) * span[i];
  return p;
}

IncrementLaw IncrementLaw::lattice(std::vector<LatticeEntry> entries) {
  if (entries.empty()) throw LawError("lattice law needs at least one entry");
  const std::size_t d = entries.front().point.size();
  if (d == 0) throw LawError("lattice law with zero-dimensional points");

  std::map<std::vector<Rational>, Rational> merged;
  Rational total = 0;
  for (auto& e : entries) {
    if (e.point.size() != d) throw LawError("support points have inconsistent dimension");
    if (e.probability < 0) throw LawError("negative probability");
    total += e.probability;
    if (e.probability == 0) continue;
    merged[e.point] += e.probability;
  }
  if (boost::multiprecision::abs(total - 1) > Rational(1, 1000000000000LL))
    throw LawError("probabilities sum to " + to_string(total) + ", not 1");
  if (merged.size() < 2) throw LawError("degenerate law: a single support point");

  IncrementLaw law;
  law.kind_ = LawKind::lattice;
  law.space_.dim = static_cast<int>(d);
  std::vector<Rational> spans(d, Rational(0));
  for (const auto& [pt, p] : merged)
    for (std::size_t i = 0; i < d; ++i) spans[i] = rational_gcd(spans[i], boost::multiprecision::abs(pt[i]));
  for (std::size_t i = 0; i < d; ++i) {
    if (spans[i] == 0) throw LawError("support is not full-dimensional");
    law.space_.span.push_back(to_double(spans[i]));
  }

  std::vector<LatticePoint> generators;
  std::vector<double> weights;
  std::vector<Rational> mean(d, Rational(0)), second(d, Rational(0));
  Rational abs_first = 0;
  for (const auto& [pt, p] : merged) {
    Atom atom;
    atom.units.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      const Rational q = pt[i] / spans[i];
      atom.units[i] = to_int64(boost::multiprecision::numerator(q));
      mean[i] += p * pt[i];
      second[i] += p * pt[i] * pt[i];
    }
    if (d == 1) abs_first += p * boost::multiprecision::abs(pt[0]);
    atom.point = law.space_.to_point(atom.units);
    atom.exact_probability = p;
    atom.probability = to_double(p);
    weights.push_back(atom.probability);
    generators.push_back(atom.units);
    law.atoms_.push_back(std::move(atom));
  }
  law.space_.basis = echelon_basis(generators, static_cast<int>(d));
  double covolume = 1.0;
  for (std::size_t i = 0; i < d; ++i)
    covolume *= static_cast<double>(law.space_.basis[i][i]) * law.space_.span[i];
  law.space_.haar_unit = covolume;
  for (std::size_t i = 0; i < d; ++i) {
    law.mean_.push_back(to_double(mean[i]));
    law.second_moment_.push_back(to_double(second[i]));
  }
  law.abs_first_moment_ = d == 1 ? to_double(abs_first) : std::numeric_limits<double>::quiet_NaN();
  law.alias_ = AliasTable(weights);
  for (const auto& a : law.atoms_) law.units_1d_.push_back(a.units.front());
  return law;
}

IncrementLaw IncrementLaw::gaussian(double sigma) {
  require_positive_finite(sigma, "gaussian sigma");
  IncrementLaw law;
  law.kind_ = LawKind::gaussian;
  law.space_ = StateSpace{1, {0.0}, 1.0, {}};
  law.mean_ = {0.0};
  law.second_moment_ = {sigma * sigma};
  law.abs_first_moment_ = sigma * std::sqrt(2.0 / std::numbers::pi);
  law.param_a_ = sigma;
  return law;
}

IncrementLaw IncrementLaw::laplace(double scale) {
  require_positive_finite(scale, "laplace scale");
  IncrementLaw law;
  law.kind_ = LawKind::laplace;
  law.space_ = StateSpace{1, {0.0}, 1.0, {}};
  law.mean_ = {0.0};
  law.second_moment_ = {2.0 * scale * scale};
  law.abs_first_moment_ = scale;
  law.param_a_ = scale;
  return law;
}

IncrementLaw IncrementLaw::uniform(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw LawError("uniform law needs finite a < b");
  IncrementLaw law;
  law.kind_ = LawKind::uniform;
  law.space_ = StateSpace{1, {0.0}, 1.0, {}};
  law.mean_ = {0.5 * (a + b)};
  law.second_moment_ = {(a * a + a * b + b * b) / 3.0};
  if (a >= 0.0)
    law.abs_first_moment_ = 0.5 * (a + b);
  else if (b <= 0.0)
    law.abs_first_moment_ = -0.5 * (a + b);
  else
    law.abs_first_moment_ = (a * a + b * b) / (2.0 * (b - a));
  law.param_a_ = a;
  law.param_b_ = b;
  return law;
}

void IncrementLaw::require_dim1(const char* what) const {
  if (space_.dim != 1) throw LawError(std::string(what) + " requires d = 1");
}

double IncrementLaw::abs_first_moment() const {
  require_dim1("abs_first_moment");
  return abs_first_moment_;
}

double IncrementLaw::tail_gt(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) throw LawError("tail_gt: dimension mismatch");
  switch (kind_) {
    case LawKind::lattice: {
      double s = 0.0;
      for (const auto& a : atoms_) {
        bool above = true;
        for (int i = 0; i < dim() && above; ++i) above = a.point[i] > x[i];
        if (above) s += a.probability;
      }
      return s;
    }
    case LawKind::gaussian:
      return normal_sf(x[0] / param_a_);
    case LawKind::laplace:
      return x[0] >= 0.0 ? 0.5 * std::exp(-x[0] / param_a_) : 1.0 - 0.5 * std::exp(x[0] / param_a_);
    case LawKind::uniform:
      return std::clamp((param_b_ - x[0]) / (param_b_ - param_a_), 0.0, 1.0);
  }
  return 0.0;
}

double IncrementLaw::cdf_le(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) throw LawError("cdf_le: dimension mismatch");
  switch (kind_) {
    case LawKind::lattice: {
      double s = 0.0;
      for (const auto& a : atoms_) {
        bool below = true;
        for (int i = 0; i < dim() && below; ++i) below = a.point[i] <= x[i];
        if (below) s += a.probability;
      }
      return s;
    }
    case LawKind::gaussian:
      return normal_cdf(x[0] / param_a_);
    case LawKind::laplace:
      return x[0] < 0.0 ? 0.5 * std::exp(x[0] / param_a_) : 1.0 - 0.5 * std::exp(-x[0] / param_a_);
    case LawKind::uniform:
      return std::clamp((x[0] - param_a_) / (param_b_ - param_a_), 0.0, 1.0);
  }
  return 0.0;
}

double IncrementLaw::cdf_lt(double x) const {
  require_dim1("cdf_lt");
  if (kind_ != LawKind::lattice) return cdf_le(x);
  double s = 0.0;
  for (const auto& a : atoms_)
    if (a.point[0] < x) s += a.probability;
  return s;
}

double IncrementLaw::density(double x) const {
  require_dim1("density");
  switch (kind_) {
    case LawKind::lattice:
      throw LawError("density: lattice law has no Lebesgue density");
    case LawKind::gaussian:
      return normal_pdf(x / param_a_) / param_a_;
    case LawKind::laplace:
      return std::exp(-std::abs(x) / param_a_) / (2.0 * param_a_);
    case LawKind::uniform:
      return x >= param_a_ && x <= param_b_ ? 1.0 / (param_b_ - param_a_) : 0.0;
  }
  return 0.0;
}

double IncrementLaw::integrated_tail(double x) const {
  require_dim1("integrated_tail");
  if (x < 0.0) throw LawError("integrated_tail: x must be nonnegative");
  switch (kind_) {
    case LawKind::lattice: {
      // P(X > t) is a step function; integrate exactly between atoms.
      double s = 0.0;
      for (const auto& a : atoms_) s += a.probability * std::clamp(a.point[0], 0.0, x);
      return s;
    }
    case LawKind::gaussian: {
      const double sg = param_a_, u = x / sg;
      return sg * (u * normal_sf(u) + normal_pdf(0.0) - normal_pdf(u));
    }
    case LawKind::laplace:
      return 0.5 * param_a_ * -std::expm1(-x / param_a_);
    case LawKind::uniform:
      return uniform_tail_integral(0.0, x, param_a_, param_b_);
  }
  return 0.0;
}

double IncrementLaw::integrated_lower(double x) const {
  require_dim1("integrated_lower");
  if (x > 0.0) throw LawError("integrated_lower: x must be nonpositive");
  switch (kind_) {
    case LawKind::lattice: {
      double s = 0.0;
      for (const auto& a : atoms_) s += a.probability * std::clamp(-a.point[0], 0.0, -x);
      return s;
    }
    case LawKind::gaussian:
    case LawKind::laplace:
      return integrated_tail(-x);
    case LawKind::uniform:
      return uniform_lower_integral(x, 0.0, param_a_, param_b_);
  }
  return 0.0;
}

double IncrementLaw::effective_radius() const {
  switch (kind_) {
    case LawKind::lattice: {
      double r = 0.0;
      for (const auto& a : atoms_)
        for (double c : a.point) r = std::max(r, std::abs(c));
      return r;
    }
    case LawKind::gaussian:
      return 40.0 * param_a_;
    case LawKind::laplace:
      return 700.0 * param_a_;
    case LawKind::uniform:
      return std::max(std::abs(param_a_), std::abs(param_b_));
  }
  return 0.0;
}

double IncrementLaw::probability_of(const std::function<bool(std::span<const double>)>& in_set) const {
  if (kind_ != LawKind::lattice) throw LawError("probability_of: lattice laws only");
  double s = 0.0;
  for (const auto& a : atoms_)
    if (in_set(a.point)) s += a.probability;
  return s;
}

double IncrementLaw::sample_scalar(RngStream& rng) const {
  switch (kind_) {
    case LawKind::lattice:
      return atoms_[alias_.sample(rng)].point[0];
    case LawKind::gaussian:
      return param_a_ * rng.normal();
    case LawKind::laplace: {
      const double e = -std::log(rng.uniform_open());
      return (rng.bits() & 1u) ? param_a_ * e : -param_a_ * e;
    }
    case LawKind::uniform:
      return param_a_ + (param_b_ - param_a_) * rng.uniform();
  }
  return 0.0;
}

Point IncrementLaw::sample(RngStream& rng) const {
  if (kind_ == LawKind::lattice) return atoms_[alias_.sample(rng)].point;
  return {sample_scalar(rng)};
}

std::string IncrementLaw::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case LawKind::lattice: {
      os << "lattice{";
      bool first = true;
      for (const auto& a : atoms_) {
        if (!first) os << ", ";
        first = false;
        if (dim() == 1) {
          os << a.point[0];
        } else {
          os << '(';
          for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << a.point[i];
          os << ')';
        }
        os << ':' << to_string(a.exact_probability);
      }
      os << '}';
      break;
    }
    case LawKind::gaussian:
      os << "gaussian(sigma=" << param_a_ << ')';
      break;
    case LawKind::laplace:
      os << "laplace(b=" << param_a_ << ')';
      break;
    case LawKind::uniform:
      os << "uniform(" << param_a_ << ", " << param_b_ << ')';
      break;
  }
  return os.str();
}

bool has_zero_mean_finite_variance(const IncrementLaw& law, double tol) {
  if (law.dim() != 1) return false;
  const double s2 = law.sigma2();
  return std::abs(law.mean().front()) <= tol && std::isfinite(s2) && s2 > 0.0;
}

}  // namespace entrex
