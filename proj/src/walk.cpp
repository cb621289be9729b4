#include "entrex/walk.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>

namespace entrex {

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

std::int64_t ceil_units(double c, double h) {
  const double q = c / h;
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(q));
}

}  // namespace

void require_on_state_space(const IncrementLaw& law, std::span<const double> start) {
  if (static_cast<int>(start.size()) != law.dim())
    throw WalkError("start has dimension " + std::to_string(start.size()) + ", law has " +
                    std::to_string(law.dim()));
  if (law.is_lattice() && !law.space().to_units(start))
    throw WalkError("start is not a point of the walk's lattice");
}

WalkStream::WalkStream(const IncrementLaw& law, Point start, std::int64_t n_steps, RngStream rng)
    : law_(&law), n_steps_(n_steps), rng_(rng), pos_(std::move(start)) {
  if (n_steps < 0) throw WalkError("n_steps must be nonnegative");
  require_on_state_space(law, pos_);
  if (law.is_lattice()) units_ = *law.space().to_units(pos_);
}

bool WalkStream::next() {
  if (index_ >= n_steps_) return false;
  if (index_ >= 0) {
    if (law_->is_lattice()) {
      const auto& step = law_->atoms()[law_->sample_atom(rng_)].units;
      for (std::size_t i = 0; i < units_.size(); ++i) units_[i] += step[i];
      pos_ = law_->space().to_point(units_);
    } else {
      pos_[0] += law_->sample_scalar(rng_);
    }
  }
  ++index_;
  return true;
}

WalkStream simulate_walk(const IncrementLaw& law, Point start, std::int64_t n_steps,
                         RngStream rng) {
  return WalkStream(law, std::move(start), n_steps, rng);
}

std::vector<double> collect_path_1d(const IncrementLaw& law, double start, std::int64_t n_steps,
                                    RngStream rng) {
  if (law.dim() != 1) throw WalkError("collect_path_1d requires d = 1");
  WalkStream w(law, {start}, n_steps, rng);
  std::vector<double> path;
  path.reserve(static_cast<std::size_t>(n_steps + 1));
  while (w.next()) path.push_back(w.position()[0]);
  return path;
}

std::int64_t CrossingTrace::count_until(std::int64_t n) const {
  return std::upper_bound(times.begin(), times.end(), n) - times.begin();
}

CrossingTrace extract_crossings(std::span<const double> path) {
  CrossingTrace t;
  if (path.empty()) return t;
  t.n_steps = static_cast<std::int64_t>(path.size()) - 1;
  t.start_negative = !nonnegative_class(path[0]);
  for (std::size_t k = 1; k < path.size(); ++k) {
    if (nonnegative_class(path[k - 1]) != nonnegative_class(path[k])) {
      t.times.push_back(static_cast<std::int64_t>(k));
      t.overshoots.push_back(path[k]);
      t.undershoots.push_back(path[k - 1]);
    }
  }
  return t;
}

CrossingTrace extract_crossings(std::span<const Point> path) {
  std::vector<double> flat;
  flat.reserve(path.size());
  for (const auto& p : path) {
    if (p.size() != 1) throw WalkError("extract_crossings requires d = 1");
    flat.push_back(p[0]);
  }
  return extract_crossings(std::span<const double>(flat));
}

UpcrossingChain upcrossing_subchain(const CrossingTrace& trace) {
  UpcrossingChain c;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (nonnegative_class(trace.overshoots[k])) {
      c.overshoots.push_back(trace.overshoots[k]);
      c.undershoots.push_back(trace.undershoots[k]);
    }
  }
  return c;
}

std::vector<double> downcrossing_subchain(const CrossingTrace& trace) {
  std::vector<double> out;
  for (double o : trace.overshoots)
    if (!nonnegative_class(o)) out.push_back(o);
  return out;
}

std::vector<LevelCrossingCount> count_level_crossings(std::span<const double> path,
                                                      std::span<const double> levels) {
  std::vector<LevelCrossingCount> out;
  out.reserve(levels.size());
  for (double a : levels) {
    LevelCrossingCount c{a, 0, 0};
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      if (path[i] < a && a <= path[i + 1]) ++c.up;
      if (path[i] >= a && a > path[i + 1]) ++c.down;
    }
    out.push_back(c);
  }
  return out;
}

EntranceEvent entrance_sampler(const IncrementLaw& law, const TargetSet& A, const Point& start,
                               std::int64_t max_steps, RngStream& rng) {
  if (max_steps < 1) throw WalkError("max_steps must be at least 1");
  require_on_state_space(law, start);
  if (law.dim() == 1 && A.lower_threshold()) {
    const auto r = scan_crossing_1d(law, start[0], *A.lower_threshold(), true, max_steps, rng);
    return {r.steps, {r.entry}, {r.pre}, r.censored};
  }
  if (law.dim() == 1 && A.upper_threshold()) {
    const auto r = scan_crossing_1d(law, start[0], *A.upper_threshold(), false, max_steps, rng);
    return {r.steps, {r.entry}, {r.pre}, r.censored};
  }
  if (law.is_lattice() && A.is_nonnegative_orthant()) {
    // Orthant membership in span units needs no conversion per step.
    LatticePoint u = *law.space().to_units(start);
    auto inside = [](const LatticePoint& v) {
      for (auto c : v)
        if (c < 0) return false;
      return true;
    };
    bool was_in = inside(u);
    LatticePoint prev_u = u;
    for (std::int64_t k = 1; k <= max_steps; ++k) {
      prev_u = u;
      const auto& step = law.atoms()[law.sample_atom(rng)].units;
      for (std::size_t i = 0; i < u.size(); ++i) u[i] += step[i];
      const bool in = inside(u);
      if (in && !was_in)
        return {k, law.space().to_point(u), law.space().to_point(prev_u), false};
      was_in = in;
    }
    return {max_steps, {}, {}, true};
  }
  Point prev = start;
  bool prev_in = A.contains(prev);
  LatticePoint units;
  if (law.is_lattice()) units = *law.space().to_units(start);
  for (std::int64_t k = 1; k <= max_steps; ++k) {
    Point cur;
    if (law.is_lattice()) {
      const auto& step = law.atoms()[law.sample_atom(rng)].units;
      for (std::size_t i = 0; i < units.size(); ++i) units[i] += step[i];
      cur = law.space().to_point(units);
    } else {
      cur = {prev[0] + law.sample_scalar(rng)};
    }
    const bool in = A.contains(cur);
    if (in && !prev_in) return {k, std::move(cur), std::move(prev), false};
    prev = std::move(cur);
    prev_in = in;
  }
  return {max_steps, {}, {}, true};
}

ScanResult scan_crossing_1d(const IncrementLaw& law, double start, double c, bool upward,
                            std::int64_t max_steps, RngStream& rng) {
  if (law.dim() != 1) throw WalkError("scan_crossing_1d requires d = 1");
  ScanResult r;
  if (law.is_lattice()) {
    const double h = law.span();
    const auto su = law.space().to_units(std::span<const double>(&start, 1));
    if (!su) throw WalkError("start is not a point of the walk's lattice");
    const std::int64_t cu = ceil_units(c, h);
    std::int64_t x = su->front();
    for (std::int64_t k = 1; k <= max_steps; ++k) {
      const std::int64_t y = x + law.sample_units(rng);
      if (upward ? (x < cu && y >= cu) : (x >= cu && y < cu)) {
        r.steps = k;
        r.entry = static_cast<double>(y) * h;
        r.pre = static_cast<double>(x) * h;
        return r;
      }
      x = y;
    }
  } else {
    double x = start;
    for (std::int64_t k = 1; k <= max_steps; ++k) {
      const double y = x + law.sample_scalar(rng);
      if (upward ? (x < c && y >= c) : (x >= c && y < c)) {
        r.steps = k;
        r.entry = y;
        r.pre = x;
        return r;
      }
      x = y;
    }
  }
  r.steps = max_steps;
  r.censored = true;
  return r;
}

namespace {

// Sum of k lattice increments, in span units, from multinomial atom counts.
std::int64_t lattice_block_sum(const IncrementLaw& law, std::int64_t k, RngStream& rng) {
  const auto& atoms = law.atoms();
  std::int64_t left = k, sum = 0;
  double rest = 1.0;
  for (std::size_t i = 0; i + 1 < atoms.size() && left > 0; ++i) {
    const double p = std::clamp(atoms[i].probability / rest, 0.0, 1.0);
    const std::int64_t c = rng.binomial(left, p);
    sum += c * atoms[i].units[0];
    left -= c;
    rest -= atoms[i].probability;
  }
  return sum + left * atoms.back().units[0];
}

constexpr std::int64_t kMinJump = 32;
constexpr double kBridgeExponent = 40.0;  // skip when P(bridge hits 0) <= e^-40

struct BridgeWalker {
  double sigma2;
  std::int64_t target;
  CrossingRun& run;
  RngStream& rng;

  // Integer-time positions of a Gaussian walk between (a, xa) and (b, xb),
  // as a Brownian bridge, visited in time order.
  void segment(std::int64_t a, double xa, std::int64_t b, double xb) {
    if (run.crossings >= target) return;
    const std::int64_t L = b - a;
    if (L == 1) {
      if ((xa < 0.0) != (xb < 0.0)) {
        ++run.crossings;
        run.sum_abs_overshoot += std::abs(xb);
        if (run.crossings == target) run.steps = b;
      }
      return;
    }
    if ((xa < 0.0) == (xb < 0.0) &&
        2.0 * std::abs(xa) * std::abs(xb) > kBridgeExponent * sigma2 * static_cast<double>(L))
      return;
    const std::int64_t m = a + L / 2;
    const double l = static_cast<double>(m - a), r = static_cast<double>(b - m);
    const double mean = xa + (xb - xa) * l / static_cast<double>(L);
    const double xm = mean + std::sqrt(sigma2 * l * r / static_cast<double>(L)) * rng.normal();
    segment(a, xa, m, xm);
    segment(m, xm, b, xb);
  }
};

}  // namespace

CrossingRun run_to_crossings(const IncrementLaw& law, double start, std::int64_t n_crossings,
                             std::int64_t max_steps, RngStream& rng) {
  if (law.dim() != 1) throw WalkError("run_to_crossings requires d = 1");
  require_on_state_space(law, std::span<const double>(&start, 1));
  CrossingRun run;
  std::int64_t t = 0;
  if (law.is_lattice()) {
    std::int64_t lo = 0, hi = 0;
    for (const auto& a : law.atoms()) {
      lo = std::min(lo, a.units[0]);
      hi = std::max(hi, a.units[0]);
    }
    std::int64_t x = law.space().to_units(std::span<const double>(&start, 1))->front();
    std::int64_t sum = 0;
    while (run.crossings < n_crossings && t < max_steps) {
      // steps that cannot reach the other side of zero
      std::int64_t k = 0;
      if (x >= 0 && lo < 0) k = x / -lo;
      if (x < 0 && hi > 0) k = (-1 - x) / hi;
      k = std::min(k, max_steps - t);
      if (k >= kMinJump) {
        x += lattice_block_sum(law, k, rng);
        t += k;
        continue;
      }
      const std::int64_t y = x + law.sample_units(rng);
      ++t;
      if ((x < 0) != (y < 0)) {
        ++run.crossings;
        sum += y < 0 ? -y : y;
        run.steps = t;
      }
      x = y;
    }
    run.sum_abs_overshoot = static_cast<double>(sum) * law.span();
  } else if (law.kind() == LawKind::gaussian) {
    const double sigma2 = law.sigma2();
    BridgeWalker bw{sigma2, n_crossings, run, rng};
    double x = start;
    while (run.crossings < n_crossings && t < max_steps) {
      std::int64_t L = static_cast<std::int64_t>(std::min(x * x / (64.0 * sigma2), 1e17));
      L = std::min(L, max_steps - t);
      if (L < kMinJump / 2) L = 1;
      const double y = x + std::sqrt(sigma2 * static_cast<double>(L)) * rng.normal();
      bw.segment(t, x, t + L, y);
      t += L;
      x = y;
    }
  } else {
    double x = start;
    while (run.crossings < n_crossings && t < max_steps) {
      const double y = x + law.sample_scalar(rng);
      ++t;
      if ((x < 0.0) != (y < 0.0)) {
        ++run.crossings;
        run.sum_abs_overshoot += std::abs(y);
        run.steps = t;
      }
      x = y;
    }
  }
  if (run.crossings < n_crossings) run.steps = t;
  return run;
}

void dump_trajectory(const IncrementLaw& law, const Point& start, std::int64_t n_steps,
                     const RngStream& rng, const std::string& bin_path) {
  std::ofstream bin(bin_path, std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + bin_path);
  WalkStream w(law, start, n_steps, rng);
  while (w.next()) {
    for (double v : w.position()) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      bits = to_little_endian(bits);
      bin.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  std::ofstream hdr(bin_path + ".hdr");
  if (!hdr) throw std::runtime_error("cannot open " + bin_path + ".hdr");
  hdr << "format = f64le\n"
      << "law = " << law.describe() << '\n'
      << "d = " << law.dim() << '\n'
      << "seed = " << rng.seed() << '\n'
      << "n = " << n_steps << '\n'
      << "start =";
  for (double v : start) hdr << ' ' << v;
  hdr << '\n';
}

std::vector<double> read_trajectory(const std::string& bin_path) {
  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + bin_path);
  std::vector<double> out;
  std::uint64_t bits;
  while (bin.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
    bits = to_little_endian(bits);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    out.push_back(v);
  }
  return out;
}

void write_crossings_csv(std::ostream& os, const CrossingTrace& trace,
                         std::span<const std::string> preamble) {
  for (const auto& line : preamble) os << "# " << line << '\n';
  os << "index,time,overshoot,undershoot\n";
  os.precision(17);
  for (std::size_t k = 0; k < trace.size(); ++k)
    os << k + 1 << ',' << trace.times[k] << ',' << trace.overshoots[k] << ','
       << trace.undershoots[k] << '\n';
}

}  // namespace entrex
