#include "entrex/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>

#include "json.hpp"

#include "entrex/numerics.hpp"

namespace entrex {

namespace {

constexpr double kQuadTol = 1e-10;

void require_dim1(const IncrementLaw& law, const char* what) {
  if (law.dim() != 1) throw MeasureError(std::string(what) + " requires d = 1");
}

Window support_window(double lo, double hi) {
  return Window{{lo}, {hi}};
}

double support_min(const IncrementLaw& law) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& a : law.atoms()) m = std::min(m, a.point[0]);
  return m;
}

double support_max(const IncrementLaw& law) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& a : law.atoms()) m = std::max(m, a.point[0]);
  return m;
}

LatticeMeasure build_lattice(const IncrementLaw& law, std::string name, const Window& window,
                             const std::function<bool(const Point&)>& in_support,
                             const std::function<double(const Point&)>& density) {
  LatticeMeasure m;
  m.name = std::move(name);
  m.law = law.describe();
  m.window = window;
  for (auto& u : lattice_points(law.space(), window)) {
    Point x = law.space().to_point(u);
    if (!in_support(x)) continue;
    m.weights.push_back(law.space().haar_unit * density(x));
    m.points.push_back(std::move(x));
    m.units.push_back(std::move(u));
  }
  return m;
}

void finish_d1(LatticeMeasure& m, double total) {
  m.total_mass = total;
  m.mass_outside_window = std::max(0.0, total - m.window_mass());
}

double expected_positive_part(const IncrementLaw& law) {
  return law.integrated_tail(law.effective_radius());
}

double expected_negative_part(const IncrementLaw& law) {
  return law.integrated_lower(-law.effective_radius());
}

}  // namespace

double LatticeMeasure::window_mass() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double LatticeMeasure::weight_at(std::span<const double> x) const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool eq = points[i].size() == x.size();
    for (std::size_t k = 0; k < x.size() && eq; ++k) eq = std::abs(points[i][k] - x[k]) <= 1e-9;
    if (eq) return weights[i];
  }
  return 0.0;
}

std::vector<LatticePoint> lattice_points(const StateSpace& space, const Window& window) {
  if (!space.is_lattice()) throw MeasureError("lattice_points: continuous state space");
  const int d = space.dim;
  if (static_cast<int>(window.lo.size()) != d || static_cast<int>(window.hi.size()) != d)
    throw MeasureError("window dimension does not match the state space");
  LatticePoint lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = static_cast<std::int64_t>(std::ceil(window.lo[i] / space.span[i] - 1e-9));
    hi[i] = static_cast<std::int64_t>(std::floor(window.hi[i] / space.span[i] + 1e-9));
    if (hi[i] < lo[i]) return {};
  }
  std::vector<LatticePoint> out;
  LatticePoint cur = lo;
  for (;;) {
    if (space.contains_units(cur)) out.push_back(cur);
    int i = d - 1;
    while (i >= 0 && cur[i] == hi[i]) {
      cur[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

Measure pi_measure(const IncrementLaw& law, std::optional<Window> window) {
  require_dim1(law, "pi_measure");
  if (law.is_lattice()) {
    const Window w = window ? *window : support_window(std::min(0.0, support_min(law)),
                                                       std::max(0.0, support_max(law)));
    auto m = build_lattice(
        law, "pi", w, [](const Point&) { return true; },
        [&law](const Point& x) { return x[0] >= 0.0 ? law.tail_gt(x[0]) : law.cdf_le(x[0]); });
    finish_d1(m, law.abs_first_moment());
    return m;
  }
  const double R = law.effective_radius();
  const double neg = expected_negative_part(law);
  const auto L = std::make_shared<const IncrementLaw>(law);  // the measure may outlive `law`
  DensityMeasure m;
  m.name = "pi";
  m.law = law.describe();
  m.lo = -R;
  m.hi = R;
  m.density = [L](double x) { return x >= 0.0 ? L->tail_gt(x) : L->cdf_le(x); };
  m.mass_up_to = [L, R, neg](double x) {
    x = std::clamp(x, -R, R);
    return x < 0.0 ? neg - L->integrated_lower(x) : neg + L->integrated_tail(x);
  };
  m.total_mass = law.abs_first_moment();
  return m;
}

Measure pi_plus(const IncrementLaw& law, std::optional<Window> window) {
  const int d = law.dim();
  if (law.is_lattice()) {
    if (d >= 2 && !window) throw MeasureError("pi_plus in d >= 2 needs a window");
    const Window w = window ? *window : support_window(0.0, std::max(0.0, support_max(law)));
    auto m = build_lattice(
        law, "pi_plus", w,
        [](const Point& x) { return std::all_of(x.begin(), x.end(), [](double c) { return c >= 0.0; }); },
        [&law](const Point& x) { return 1.0 - law.cdf_le(x); });
    if (d == 1) finish_d1(m, expected_positive_part(law));
    return m;
  }
  const double R = law.effective_radius();
  const auto L = std::make_shared<const IncrementLaw>(law);  // the measure may outlive `law`
  DensityMeasure m;
  m.name = "pi_plus";
  m.law = law.describe();
  m.lo = 0.0;
  m.hi = R;
  m.density = [L](double x) { return x >= 0.0 ? L->tail_gt(x) : 0.0; };
  m.mass_up_to = [L, R](double x) { return L->integrated_tail(std::clamp(x, 0.0, R)); };
  m.total_mass = expected_positive_part(law);
  return m;
}

Measure pi_minus(const IncrementLaw& law, std::optional<Window> window) {
  const int d = law.dim();
  if (law.is_lattice()) {
    if (d >= 2 && !window) throw MeasureError("pi_minus in d >= 2 needs a window");
    const Window w = window ? *window : support_window(std::min(0.0, support_min(law)), 0.0);
    auto m = build_lattice(
        law, "pi_minus", w,
        [](const Point& x) { return std::all_of(x.begin(), x.end(), [](double c) { return c < 0.0; }); },
        [&law](const Point& x) { return 1.0 - law.tail_gt(x); });
    if (d == 1) finish_d1(m, expected_negative_part(law));
    return m;
  }
  const double R = law.effective_radius();
  const double neg = expected_negative_part(law);
  const auto L = std::make_shared<const IncrementLaw>(law);  // the measure may outlive `law`
  DensityMeasure m;
  m.name = "pi_minus";
  m.law = law.describe();
  m.lo = -R;
  m.hi = 0.0;
  m.density = [L](double x) { return x < 0.0 ? L->cdf_le(x) : 0.0; };
  m.mass_up_to = [L, R, neg](double x) { return neg - L->integrated_lower(std::clamp(x, -R, 0.0)); };
  m.total_mass = neg;
  return m;
}

LatticeMeasure lambda_entrance(const IncrementLaw& law, const TargetSet& A, const Window& window) {
  if (!law.is_lattice()) throw MeasureError("lambda_entrance: lattice laws only");
  return build_lattice(
      law, "lambda_entrance[" + A.label() + "]", window, [&A](const Point& x) { return A.contains(x); },
      [&law, &A](const Point& x) {
        return law.probability_of([&](std::span<const double> a) {
          Point y(x.size());
          for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - a[i];
          return !A.contains(y);
        });
      });
}

LatticeMeasure lambda_exit(const IncrementLaw& law, const TargetSet& A, const Window& window) {
  if (!law.is_lattice()) throw MeasureError("lambda_exit: lattice laws only");
  return build_lattice(
      law, "lambda_exit[" + A.label() + "]", window, [&A](const Point& x) { return !A.contains(x); },
      [&law, &A](const Point& x) {
        return law.probability_of([&](std::span<const double> a) {
          Point y(x.size());
          for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + a[i];
          return A.contains(y);
        });
      });
}

double lambda_entrance_density(const IncrementLaw& law, const TargetSet& A, double x) {
  require_dim1(law, "lambda_entrance_density");
  if (law.is_lattice()) throw MeasureError("lambda_entrance_density: continuous laws only");
  if (!A.contains(x)) return 0.0;
  // x - X in A^c
  if (auto c = A.lower_threshold()) return law.tail_gt(x - *c);
  if (auto c = A.upper_threshold()) return law.cdf_le(x - *c);
  const double R = law.effective_radius();
  return adaptive_simpson(
             [&](double y) { return A.contains(x - y) ? 0.0 : law.density(y); }, -R, R, kQuadTol)
      .value;
}

double lambda_exit_density(const IncrementLaw& law, const TargetSet& A, double x) {
  require_dim1(law, "lambda_exit_density");
  if (law.is_lattice()) throw MeasureError("lambda_exit_density: continuous laws only");
  if (A.contains(x)) return 0.0;
  if (auto c = A.lower_threshold()) return 1.0 - law.cdf_lt(*c - x);  // x + X >= c
  if (auto c = A.upper_threshold()) return law.cdf_lt(*c - x);        // x + X < c
  const double R = law.effective_radius();
  return adaptive_simpson(
             [&](double y) { return A.contains(x + y) ? law.density(y) : 0.0; }, -R, R, kQuadTol)
      .value;
}

namespace {

MomentResult lattice_moment(const LatticeMeasure& m, int k, bool absolute) {
  MomentResult r;
  double radius = 0.0;
  for (std::size_t i = 0; i < m.points.size(); ++i) {
    const double x = m.points[i][0];
    r.value += (absolute ? std::pow(std::abs(x), k) : std::pow(x, k)) * m.weights[i];
    radius = std::max(radius, std::abs(x));
  }
  if (m.infinite())
    r.tail_bound = std::numeric_limits<double>::infinity();
  else
    r.tail_bound = m.mass_outside_window > 1e-15 ? std::numeric_limits<double>::infinity() : 0.0;
  return r;
}

MomentResult density_moment(const DensityMeasure& m, int k, bool absolute) {
  auto f = [&](double x) {
    return (absolute ? std::pow(std::abs(x), k) : std::pow(x, k)) * m.density(x);
  };
  MomentResult r;
  if (m.lo < 0.0) {
    const auto q = adaptive_simpson(f, m.lo, std::min(0.0, m.hi), kQuadTol);
    r.value += q.value;
    r.tail_bound += q.error_estimate;
  }
  if (m.hi > 0.0) {
    const auto q = adaptive_simpson(f, std::max(0.0, m.lo), m.hi, kQuadTol);
    r.value += q.value;
    r.tail_bound += q.error_estimate;
  }
  return r;
}

}  // namespace

MomentResult absolute_moment(const Measure& m, int k) {
  if (const auto* lm = std::get_if<LatticeMeasure>(&m)) {
    if (!lm->points.empty() && lm->points.front().size() != 1) throw MeasureError("moments require d = 1");
    return lattice_moment(*lm, k, true);
  }
  return density_moment(std::get<DensityMeasure>(m), k, true);
}

MomentResult moment(const Measure& m, int k) {
  if (const auto* lm = std::get_if<LatticeMeasure>(&m)) {
    if (!lm->points.empty() && lm->points.front().size() != 1) throw MeasureError("moments require d = 1");
    return lattice_moment(*lm, k, false);
  }
  return density_moment(std::get<DensityMeasure>(m), k, false);
}

MeasureSampler::MeasureSampler(const Measure& m) {
  if (const auto* lm = std::get_if<LatticeMeasure>(&m)) {
    if (lm->infinite()) throw MeasureError("cannot normalize an infinite measure");
    if (lm->mass_outside_window > 1e-12 * *lm->total_mass)
      throw MeasureError("window does not carry the full mass of the measure");
    lattice_ = true;
    points_ = lm->points;
    const double total = lm->window_mass();
    for (double w : lm->weights) probs_.push_back(w / total);
    alias_ = AliasTable(probs_);
    return;
  }
  const auto& dm = std::get<DensityMeasure>(m);
  if (dm.infinite()) throw MeasureError("cannot normalize an infinite measure");
  lattice_ = false;
  mass_up_to_ = dm.mass_up_to;
  lo_ = dm.lo;
  hi_ = dm.hi;
  total_ = *dm.total_mass;
}

double MeasureSampler::cdf(double x) const {
  if (lattice_) {
    double s = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (points_[i][0] <= x) s += probs_[i];
    return std::min(1.0, s);
  }
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  return std::clamp(mass_up_to_(x) / total_, 0.0, 1.0);
}

double MeasureSampler::sample_scalar(RngStream& rng) const {
  if (lattice_) return points_[alias_.sample(rng)][0];
  const double u = rng.uniform_open();
  return bisect_increasing([this](double x) { return cdf(x); }, u, lo_, hi_, 1e-14);
}

Point MeasureSampler::sample(RngStream& rng) const {
  if (lattice_) return points_[alias_.sample(rng)];
  return {sample_scalar(rng)};
}

void write_measure_csv(std::ostream& os, const LatticeMeasure& m, const std::string& extra_json) {
  nlohmann::json h = nlohmann::json::parse(extra_json);
  h["name"] = m.name;
  h["law"] = m.law;
  h["window"] = {{"lo", m.window.lo}, {"hi", m.window.hi}};
  if (m.total_mass)
    h["total_mass"] = *m.total_mass;
  else
    h["total_mass"] = "inf";
  os << "# " << h.dump() << '\n';
  const std::size_t d = m.window.lo.size();
  if (d == 1) {
    os << "point,weight\n";
  } else {
    for (std::size_t i = 0; i < d; ++i) os << 'x' << i + 1 << ',';
    os << "weight\n";
  }
  os.precision(17);
  for (std::size_t i = 0; i < m.points.size(); ++i) {
    for (double c : m.points[i]) os << c << ',';
    os << m.weights[i] << '\n';
  }
}

}  // namespace entrex
