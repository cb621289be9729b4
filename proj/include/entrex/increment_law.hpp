#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "entrex/numerics.hpp"
#include "entrex/rational.hpp"
#include "entrex/rng.hpp"

namespace entrex {

using Point = std::vector<double>;
using LatticePoint = std::vector<std::int64_t>;

class LawError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class LawKind { lattice, gaussian, laplace, uniform };

/// The state space Z of a walk: the closed subgroup generated by the
/// support of the increment, with its normalized Haar measure.
///
/// Lattice points are stored in per-axis units of `span`. The subgroup may be
/// a proper sublattice of span_1 Z x ... x span_d Z (e.g. the checkerboard
/// lattice); `basis` holds its echelon basis so membership is exact and
/// `haar_unit` is the covolume, i.e. the lambda-mass of a single point.
struct StateSpace {
  int dim = 1;
  std::vector<double> span;                 // 0 means the real line
  double haar_unit = 1.0;                   // lambda({x}) on lattices
  std::vector<LatticePoint> basis;          // echelon basis, lattice only

  bool is_lattice() const noexcept { return !span.empty() && span.front() > 0.0; }

  /// Lattice coordinates of x in units of span, or nullopt if x is not in Z.
  std::optional<LatticePoint> to_units(std::span<const double> x) const;
  bool contains(std::span<const double> x) const { return !is_lattice() || to_units(x).has_value(); }
  bool contains_units(std::span<const std::int64_t> units) const;
  Point to_point(std::span<const std::int64_t> units) const;
};

struct LatticeEntry {
  std::vector<Rational> point;
  Rational probability;
};

struct Atom {
  LatticePoint units;  // point / span, per axis
  Point point;
  double probability = 0.0;
  Rational exact_probability;
};

/// Law of the increment X_1 of a random walk. Immutable after construction.
class IncrementLaw {
 public:
  /// Lattice law from a support table; probabilities must sum to 1.
  static IncrementLaw lattice(std::vector<LatticeEntry> entries);
  static IncrementLaw gaussian(double sigma);
  static IncrementLaw laplace(double scale);
  static IncrementLaw uniform(double a, double b);

  LawKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return space_.dim; }
  bool is_lattice() const noexcept { return kind_ == LawKind::lattice; }
  const StateSpace& space() const noexcept { return space_; }
  /// Span h for d = 1 (0 for continuous laws).
  double span() const noexcept { return space_.span.front(); }

  const Point& mean() const noexcept { return mean_; }
  /// E X_i^2 per axis; +inf when not finite.
  const Point& second_moment() const noexcept { return second_moment_; }
  /// E|X_1|, d = 1 only.
  double abs_first_moment() const;
  /// sigma^2 := E X_1^2 for d = 1.
  double sigma2() const { return second_moment_.front(); }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  /// P(X_1 > x) with strict coordinate-wise inequality.
  double tail_gt(std::span<const double> x) const;
  /// P(X_1 <= x) coordinate-wise.
  double cdf_le(std::span<const double> x) const;
  double tail_gt(double x) const { return tail_gt(std::span<const double>(&x, 1)); }
  double cdf_le(double x) const { return cdf_le(std::span<const double>(&x, 1)); }
  /// P(X_1 < x), d = 1.
  double cdf_lt(double x) const;

  /// Density of a continuous d = 1 law.
  double density(double x) const;
  /// Closed forms of int_0^x P(X_1 > t) dt (x >= 0) and
  /// int_x^0 P(X_1 <= t) dt (x <= 0) for continuous d = 1 laws.
  double integrated_tail(double x) const;
  double integrated_lower(double x) const;
  /// Point beyond which both tails are below 1e-300 (continuous laws).
  double effective_radius() const;

  /// P(X_1 in B) for a lattice law, by summing over atoms.
  double probability_of(const std::function<bool(std::span<const double>)>& in_set) const;

  Point sample(RngStream& rng) const;
  /// d = 1 draws.
  double sample_scalar(RngStream& rng) const;
  std::size_t sample_atom(RngStream& rng) const noexcept { return alias_.sample(rng); }
  /// d = 1 lattice step in units of h.
  std::int64_t sample_units(RngStream& rng) const noexcept { return units_1d_[alias_.sample(rng)]; }

  /// Continuous-law parameters (sigma, Laplace scale, or uniform a/b).
  double param_a() const noexcept { return param_a_; }
  double param_b() const noexcept { return param_b_; }

  std::string describe() const;

 private:
  IncrementLaw() = default;
  void require_dim1(const char* what) const;

  LawKind kind_ = LawKind::lattice;
  StateSpace space_;
  Point mean_;
  Point second_moment_;
  double abs_first_moment_ = 0.0;
  std::vector<Atom> atoms_;
  std::vector<std::int64_t> units_1d_;  // first coordinate of each atom, in units
  AliasTable alias_;
  double param_a_ = 0.0;
  double param_b_ = 0.0;
};

/// True when E X_1 = 0 and 0 < sigma^2 < inf (d = 1), the standing
/// assumptions of the crossing limit theorems.
bool has_zero_mean_finite_variance(const IncrementLaw& law, double tol = 1e-12);

}  // namespace entrex
