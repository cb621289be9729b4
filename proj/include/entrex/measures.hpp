#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "entrex/increment_law.hpp"
#include "entrex/rng.hpp"
#include "entrex/target_set.hpp"

namespace entrex {

class MeasureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed coordinate box used to window lattice measures.
struct Window {
  Point lo;
  Point hi;
};

/// Weights of a measure on the lattice points of a window. Each weight is
/// the lambda-density times the lambda-mass of one point.
struct LatticeMeasure {
  std::string name;
  std::string law;
  Window window;
  std::vector<LatticePoint> units;
  std::vector<Point> points;
  std::vector<double> weights;
  /// Total mass over the whole state space; nullopt when infinite.
  std::optional<double> total_mass;
  /// Mass outside the window (upper bound), when total_mass is known.
  double mass_outside_window = 0.0;

  bool infinite() const noexcept { return !total_mass.has_value(); }
  double window_mass() const;
  /// Weight at a lattice point of the window, 0 if absent.
  double weight_at(std::span<const double> x) const;
};

/// A measure on (part of) the real line with a Lebesgue density.
struct DensityMeasure {
  std::string name;
  std::string law;
  double lo = 0.0;  // support [lo, hi]
  double hi = 0.0;
  std::function<double(double)> density;
  /// Mass of (lo, x]; exact where a closed form exists.
  std::function<double(double)> mass_up_to;
  std::optional<double> total_mass;

  bool infinite() const noexcept { return !total_mass.has_value(); }
};

using Measure = std::variant<LatticeMeasure, DensityMeasure>;

/// pi = [1(x >= 0) P(X_1 > x) + 1(x < 0) P(X_1 <= x)] lambda, d = 1.
/// Lattice measures cover the full (finite) support unless a window is given.
Measure pi_measure(const IncrementLaw& law, std::optional<Window> window = std::nullopt);

/// pi_+ = (1 - P(X_1 <= x)) lambda on [0, inf)^d. A window is required for d >= 2.
Measure pi_plus(const IncrementLaw& law, std::optional<Window> window = std::nullopt);
/// pi_- = (1 - P(X_1 > x)) lambda on (-inf, 0)^d.
Measure pi_minus(const IncrementLaw& law, std::optional<Window> window = std::nullopt);

/// P(X_1 in x - A^c) lambda(dx) restricted to A, on a lattice window.
LatticeMeasure lambda_entrance(const IncrementLaw& law, const TargetSet& A, const Window& window);
/// P(X_1 in A - x) lambda(dx) restricted to A^c, on a lattice window.
LatticeMeasure lambda_exit(const IncrementLaw& law, const TargetSet& A, const Window& window);
/// Continuous d = 1 density of lambda_A^entr at x by quadrature (tol 1e-10).
double lambda_entrance_density(const IncrementLaw& law, const TargetSet& A, double x);
double lambda_exit_density(const IncrementLaw& law, const TargetSet& A, double x);

/// Lattice points of `space` inside a window.
std::vector<LatticePoint> lattice_points(const StateSpace& space, const Window& window);

struct MomentResult {
  double value = 0.0;
  double tail_bound = 0.0;  // bound on the contribution outside the window
};

/// int |x|^k m(dx), d = 1.
MomentResult absolute_moment(const Measure& m, int k);
/// int x^k m(dx), d = 1.
MomentResult moment(const Measure& m, int k);

/// Sampler from m / total mass. Throws MeasureError for infinite mass.
class MeasureSampler {
 public:
  explicit MeasureSampler(const Measure& m);

  Point sample(RngStream& rng) const;
  double sample_scalar(RngStream& rng) const;
  /// Normalized CDF (d = 1).
  double cdf(double x) const;

 private:
  bool lattice_ = true;
  std::vector<Point> points_;
  std::vector<double> probs_;
  AliasTable alias_;
  std::function<double(double)> mass_up_to_;
  double lo_ = 0.0, hi_ = 0.0, total_ = 0.0;
};

/// CSV of point,weight preceded by a '# ' line holding a JSON header
/// (name, law, window, total_mass or "inf", plus `extra` fields).
void write_measure_csv(std::ostream& os, const LatticeMeasure& m, const std::string& extra_json = "{}");

}  // namespace entrex
