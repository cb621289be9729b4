#include "entrex/entrance_chains.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "entrex/numerics.hpp"
#include "entrex/walk.hpp"

namespace entrex {

MarkovSampler::MarkovSampler(int dim, Step step)
    : dim_(dim), step_(std::make_shared<const Step>(std::move(step))) {
  if (dim < 1) throw std::invalid_argument("MarkovSampler: dimension must be positive");
  if (!*step_) throw std::invalid_argument("MarkovSampler: empty step function");
}

MarkovSampler MarkovSampler::random_walk(const IncrementLaw& law) {
  MarkovSampler s(law.dim(), [&law](Point& x, RngStream& rng) {
    if (law.is_lattice()) {
      const auto& a = law.atoms()[law.sample_atom(rng)];
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += a.point[i];
    } else {
      x[0] += law.sample_scalar(rng);
    }
  });
  s.law_ = &law;
  return s;
}

MarkovSampler MarkovSampler::finite(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("finite sampler needs at least one state");
  auto tables = std::make_shared<std::vector<AliasTable>>();
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw std::invalid_argument("transition matrix must be square");
    tables->emplace_back(r);
  }
  MarkovSampler s(1, [tables](Point& x, RngStream& rng) {
    const auto i = static_cast<std::size_t>(x[0]);
    x[0] = static_cast<double>((*tables)[i].sample(rng));
  });
  s.finite_size_ = rows.size();
  return s;
}

TargetSet index_set(const std::vector<int>& members, int n) {
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < members.size(); ++k) {
    const int m = members[k];
    if (m < 0 || m >= n) throw std::invalid_argument("index_set: state out of range");
    in[static_cast<std::size_t>(m)] = 1;
    os << (k ? "," : "") << m;
  }
  os << '}';
  return TargetSet(os.str(), [in = std::move(in)](std::span<const double> x) {
    const double v = x[0];
    if (v < 0.0 || v >= static_cast<double>(in.size())) return false;
    return in[static_cast<std::size_t>(v)] != 0;
  });
}

namespace {

// Runs the underlying chain from `state` (already in A^c or A, flag given)
// until the next A^c -> A transition. Returns (entry, pre-entry) or nullopt.
std::optional<std::pair<Point, Point>> next_entry(const SampledSubchain& sub, Point state,
                                                  bool in_A, RngStream& rng) {
  const auto* law = sub.sampler.walk_law();
  if (law && law->dim() == 1) {
    if (auto c = sub.A.lower_threshold()) {
      const auto r = scan_crossing_1d(*law, state[0], *c, true, sub.horizon, rng);
      if (r.censored) return std::nullopt;
      return std::make_pair(Point{r.entry}, Point{r.pre});
    }
    if (auto c = sub.A.upper_threshold()) {
      const auto r = scan_crossing_1d(*law, state[0], *c, false, sub.horizon, rng);
      if (r.censored) return std::nullopt;
      return std::make_pair(Point{r.entry}, Point{r.pre});
    }
  }
  Point prev;
  bool prev_in = in_A;
  for (std::int64_t k = 0; k < sub.horizon; ++k) {
    prev = state;
    sub.sampler.step(state, rng);
    const bool in = sub.A.contains(state);
    if (in && !prev_in) return std::make_pair(std::move(state), std::move(prev));
    prev_in = in;
  }
  return std::nullopt;
}

}  // namespace

SubchainState entrance_step(const SampledSubchain& sub, const Point& x, RngStream& rng) {
  if (!sub.A.contains(x)) throw std::invalid_argument("entrance_step: state is not in A");
  auto e = next_entry(sub, x, true, rng);
  if (!e) return std::nullopt;
  return std::move(e->first);
}

SubchainState exit_step(const SampledSubchain& sub, const Point& x, RngStream& rng) {
  if (sub.A.contains(x)) throw std::invalid_argument("exit_step: state is not in A^c");
  Point z;
  std::int64_t draws = 0;
  for (;;) {
    if (draws++ >= sub.rejection_budget)
      throw RejectionBudgetExhausted("exit_step: no first step into A within the rejection budget");
    z = x;
    sub.sampler.step(z, rng);
    if (sub.A.contains(z)) break;
  }
  auto e = next_entry(sub, std::move(z), true, rng);
  if (!e) return std::nullopt;
  return std::move(e->second);
}

SubchainRun run_subchain(const SampledSubchain& sub, const Point& x0, std::int64_t n,
                         RngStream& rng) {
  if (n < 0) throw std::invalid_argument("run_subchain: n must be nonnegative");
  const bool entrance = sub.mode == SubchainMode::entrance;
  if (entrance != sub.A.contains(x0))
    throw std::invalid_argument(entrance ? "run_subchain: x0 must lie in A"
                                         : "run_subchain: x0 must lie in A^c");
  SubchainRun run;
  run.states.reserve(static_cast<std::size_t>(n));
  SubchainState cur = x0;
  for (std::int64_t k = 0; k < n; ++k) {
    if (cur) {
      cur = entrance ? entrance_step(sub, *cur, rng) : exit_step(sub, *cur, rng);
      if (!cur) ++run.censored;
    }
    run.states.push_back(cur);
  }
  return run;
}

std::vector<PathEntrance> entrances_along(const std::vector<Point>& path, const TargetSet& A) {
  std::vector<PathEntrance> out;
  for (std::size_t k = 1; k < path.size(); ++k)
    if (!A.contains(path[k - 1]) && A.contains(path[k]))
      out.push_back({static_cast<std::int64_t>(k), path[k], path[k - 1]});
  return out;
}

}  // namespace entrex
