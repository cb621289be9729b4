#include "entrex/stat_verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "entrex/entrance_chains.hpp"
#include "entrex/finite_chain.hpp"
#include "entrex/numerics.hpp"
#include "entrex/parallel.hpp"
#include "entrex/stats.hpp"
#include "entrex/walk.hpp"

namespace entrex {

namespace {

constexpr std::size_t kBlocks = 100;
constexpr double kChiSquareAlpha = 0.01;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Half-open index range [lo, hi) of block b when n items are cut into kBlocks.
std::pair<std::int64_t, std::int64_t> block_range(std::int64_t n, std::size_t b, std::size_t blocks = kBlocks) {
  const auto nb = static_cast<std::int64_t>(blocks);
  const auto bi = static_cast<std::int64_t>(b);
  return {n * bi / nb, n * (bi + 1) / nb};
}

void require_walk_moments(const IncrementLaw& law, const char* what) {
  if (law.dim() != 1) throw PreconditionError(std::string(what) + ": requires d = 1");
  if (!has_zero_mean_finite_variance(law))
    throw PreconditionError(std::string(what) + ": requires E X_1 = 0 and 0 < sigma^2 < inf");
}

void require_lattice(const IncrementLaw& law, const char* what) {
  if (!law.is_lattice()) throw PreconditionError(std::string(what) + ": requires a lattice law");
}

std::int64_t to_units_1d(const IncrementLaw& law, double x, const char* what) {
  const auto u = law.space().to_units(std::span<const double>(&x, 1));
  if (!u) throw PreconditionError(std::string(what) + ": point is not on the lattice");
  return u->front();
}

ExperimentReport base_report(std::string experiment, std::string name, const IncrementLaw* law,
                             const RunOptions& opt) {
  ExperimentReport r;
  r.experiment = std::move(experiment);
  r.name = std::move(name);
  if (law) r.law = law->describe();
  r.seed = opt.seed;
  return r;
}

// Compares landing points (d = 1) with a normalized target measure.
void compare_with_measure(ExperimentReport& r, const IncrementLaw& law, std::vector<double> samples,
                          std::int64_t censored, const Measure& target) {
  const MeasureSampler norm(target);
  const auto n = static_cast<std::int64_t>(samples.size());
  r.censor_rate = static_cast<double>(censored) / static_cast<double>(n + censored);
  r.sizes["accepted"] = n;
  r.sizes["censored"] = censored;
  if (n == 0) {
    r.criterion = "no uncensored samples";
    r.within_tolerance = false;
    return;
  }
  if (!law.is_lattice()) {
    const auto emp = EmpiricalDistribution::from_samples(std::move(samples));
    const double D = ks_statistic(emp, [&](double x) { return norm.cdf(x); });
    r.statistic = D;
    r.target = 0.0;
    r.tolerance = ks_critical_value(n);
    r.criterion = "ks_distance <= 1.63/sqrt(n)";
    r.within_tolerance = D <= r.tolerance;
    r.effect_size = D * std::sqrt(static_cast<double>(n));
    r.details["ks_p_value"] = kolmogorov_sf(r.effect_size);
    r.details["empirical_mean"] = emp.mean();
    return;
  }
  const auto& lm = std::get<LatticeMeasure>(target);
  const double total = lm.window_mass();
  std::vector<double> probs;
  for (double w : lm.weights) probs.push_back(w / total);
  std::vector<std::int64_t> counts(probs.size(), 0);
  std::int64_t off = 0;
  std::map<std::int64_t, std::size_t> cell;
  for (std::size_t i = 0; i < lm.units.size(); ++i) cell[lm.units[i].front()] = i;
  for (double x : samples) {
    const auto u = law.space().to_units(std::span<const double>(&x, 1));
    auto it = u ? cell.find(u->front()) : cell.end();
    if (it == cell.end())
      ++off;
    else
      ++counts[it->second];
  }
  const auto chi = chi_square_gof(counts, probs, off);
  std::vector<double> emp(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) emp[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  double tv = total_variation(emp, probs);
  if (off > 0) tv += 0.5 * static_cast<double>(off) / static_cast<double>(n);
  r.statistic = chi.p_value;
  r.target = 1.0;
  r.tolerance = kChiSquareAlpha;
  r.criterion = "chi_square_p_value > 0.01";
  r.within_tolerance = chi.p_value > kChiSquareAlpha;
  r.effect_size = tv;
  r.details["chi_square"] = chi.statistic;
  r.details["dof"] = chi.dof;
  r.details["off_support"] = chi.off_support;
  r.details["tv"] = tv;
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t i = 0; i < probs.size(); ++i)
    cells.push_back({{"point", lm.points[i][0]}, {"expected", probs[i]}, {"observed", emp[i]}});
  r.details["cells"] = cells;
}

struct Landings {
  std::vector<double> points;
  std::int64_t censored = 0;
};

// Draws x ~ source, runs to the first entrance into A, collects entry points.
Landings sample_landings(const IncrementLaw& law, const MeasureSampler& source, const TargetSet& A,
                         std::int64_t n, std::int64_t horizon, const RunOptions& opt,
                         const std::string& stream_name) {
  const RngStream root = RngStream(opt.seed).split(stream_name);
  auto blocks = run_blocks(kBlocks, opt.threads, [&](std::size_t b) {
    RngStream rng = root.split(b);
    const auto [lo, hi] = block_range(n, b);
    Landings out;
    for (std::int64_t i = lo; i < hi; ++i) {
      const Point x = source.sample(rng);
      const auto e = entrance_sampler(law, A, x, horizon, rng);
      if (e.censored)
        ++out.censored;
      else
        out.points.push_back(e.entry_point[0]);
    }
    return out;
  });
  Landings all;
  for (auto& b : blocks) {
    all.points.insert(all.points.end(), b.points.begin(), b.points.end());
    all.censored += b.censored;
  }
  return all;
}

}  // namespace

void ExperimentReport::finalize() { pass = within_tolerance && censor_rate <= kMaxCensorRate; }

std::string ExperimentReport::verdict() const {
  if (pass) return "pass";
  return censor_rate > kMaxCensorRate ? "censored" : "fail";
}

nlohmann::json ExperimentReport::to_json(bool with_runtime) const {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  };
  nlohmann::json j = {{"experiment", experiment},
          {"name", name},
          {"law", law},
          {"seed", seed},
          {"sizes", sizes},
          {"statistic", num(statistic)},
          {"target", num(target)},
          {"tolerance", num(tolerance)},
          {"criterion", criterion},
          {"censor_rate", num(censor_rate)},
          {"effect_size", num(effect_size)},
          {"within_tolerance", within_tolerance},
          {"verdict", verdict()},
          {"details", details}};
  if (with_runtime) j["runtime_s"] = runtime_s;
  return j;
}

ExperimentReport stationarity_test(const IncrementLaw& law, std::int64_t n_samples, std::int64_t horizon,
                                   const RunOptions& opt) {
  const auto t0 = Clock::now();
  require_walk_moments(law, "stationarity_test");
  auto r = base_report("stationarity", "stationarity/" + law.describe(), &law, opt);
  r.sizes = {{"n_samples", n_samples}, {"horizon", horizon}};
  const Measure target = pi_plus(law);
  const MeasureSampler source(target);
  const SampledSubchain sub{MarkovSampler::random_walk(law), TargetSet::nonnegative_orthant(1),
                            SubchainMode::entrance, horizon};
  const RngStream root = RngStream(opt.seed).split("stationarity");
  auto blocks = run_blocks(kBlocks, opt.threads, [&](std::size_t b) {
    RngStream rng = root.split(b);
    const auto [lo, hi] = block_range(n_samples, b);
    Landings out;
    for (std::int64_t i = lo; i < hi; ++i) {
      const Point x = source.sample(rng);
      const auto y = entrance_step(sub, x, rng);
      if (y)
        out.points.push_back((*y)[0]);
      else
        ++out.censored;
    }
    return out;
  });
  Landings all;
  for (auto& b : blocks) {
    all.points.insert(all.points.end(), b.points.begin(), b.points.end());
    all.censored += b.censored;
  }
  r.sizes["n_samples"] = n_samples;
  compare_with_measure(r, law, std::move(all.points), all.censored, target);
  r.details["target_measure"] = "pi_plus normalized";
  r.runtime_s = seconds_since(t0);
  r.finalize();
  return r;
}

std::vector<ExperimentReport> alternation_test(const IncrementLaw& law, std::int64_t n_samples,
                                               std::int64_t horizon, const RunOptions& opt) {
  require_walk_moments(law, "alternation_test");
  const Measure plus = pi_plus(law);
  const Measure minus = pi_minus(law);
  std::vector<ExperimentReport> out;
  struct Direction {
    const char* label;
    const Measure* from;
    const Measure* to;
    TargetSet A;
  };
  const Direction dirs[] = {
      {"minus_to_plus", &minus, &plus, TargetSet::nonnegative_orthant(1)},
      {"plus_to_minus", &plus, &minus, TargetSet::negative_orthant(1)},
  };
  for (const auto& d : dirs) {
    const auto t0 = Clock::now();
    auto r = base_report("alternation", std::string("alternation/") + d.label + "/" + law.describe(), &law, opt);
    r.sizes = {{"n_samples", n_samples}, {"horizon", horizon}};
    const MeasureSampler source(*d.from);
    auto land = sample_landings(law, source, d.A, n_samples, horizon, opt, d.label);
    compare_with_measure(r, law, std::move(land.points), land.censored, *d.to);
    r.details["direction"] = d.label;
    r.runtime_s = seconds_since(t0);
    r.finalize();
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

}  // namespace

std::vector<ExperimentReport> lln_overshoots(const IncrementLaw& law, const std::vector<double>& starts,
                                             std::int64_t n_crossings, std::int64_t max_steps,
                                             double tolerance, const RunOptions& opt) {
  require_walk_moments(law, "lln_overshoots");
  if (n_crossings < 1 || max_steps < 1) throw PreconditionError("lln_overshoots: sizes must be positive");
  for (double s : starts) require_on_state_space(law, std::span<const double>(&s, 1));
  const double target = law.sigma2() / (2.0 * law.abs_first_moment());
  const RngStream root = RngStream(opt.seed).split("lln");
  auto runs = run_blocks(starts.size(), opt.threads, [&](std::size_t i) {
    const auto t0 = Clock::now();
    RngStream rng = root.split(i);
    auto run = run_to_crossings(law, starts[i], n_crossings, max_steps, rng);
    return std::make_pair(run, seconds_since(t0));
  });
  std::vector<ExperimentReport> out;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const auto& [run, secs] = runs[i];
    std::ostringstream nm;
    nm << "lln/" << law.describe() << "/start=" << starts[i];
    auto r = base_report("lln_overshoots", nm.str(), &law, opt);
    r.sizes = {{"n_crossings", n_crossings}, {"max_steps", max_steps}};
    const double avg = run.crossings > 0 ? run.sum_abs_overshoot / static_cast<double>(run.crossings) : 0.0;
    r.statistic = avg;
    r.target = target;
    r.tolerance = tolerance;
    r.criterion = "|mean|O|/target - 1| <= tolerance";
    r.effect_size = std::abs(avg / target - 1.0);
    r.within_tolerance = run.crossings == n_crossings && r.effect_size <= tolerance;
    r.censor_rate = run.crossings == n_crossings ? 0.0 : 1.0;
    r.details["start"] = starts[i];
    r.details["crossings"] = run.crossings;
    r.details["steps"] = run.steps;
    r.details["relative_error"] = r.effect_size;
    r.runtime_s = secs;
    r.finalize();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ExperimentReport> clt_level_crossings(const IncrementLaw& law, const std::vector<double>& starts,
                                                  std::int64_t n_steps, std::int64_t n_replicas,
                                                  double sup_tolerance, double mean_tolerance,
                                                  const RunOptions& opt, const std::string& csv_dir,
                                                  const std::string& provenance) {
  require_walk_moments(law, "clt_level_crossings");
  if (n_steps < 1 || n_replicas < 1) throw PreconditionError("clt_level_crossings: sizes must be positive");
  for (double s : starts) require_on_state_space(law, std::span<const double>(&s, 1));
  const double scale = std::sqrt(law.sigma2()) / (law.abs_first_moment() * std::sqrt(static_cast<double>(n_steps)));
  const double half_normal_mean = std::sqrt(2.0 / std::numbers::pi);
  std::vector<ExperimentReport> out;
  for (std::size_t si = 0; si < starts.size(); ++si) {
    const auto t0 = Clock::now();
    const double start = starts[si];
    const RngStream root = RngStream(opt.seed).split("clt").split(si);
    auto blocks = run_blocks(kBlocks, opt.threads, [&](std::size_t b) {
      RngStream rng = root.split(b);
      const auto [lo, hi] = block_range(n_replicas, b);
      std::vector<double> vals;
      vals.reserve(static_cast<std::size_t>(hi - lo));
      for (std::int64_t rep = lo; rep < hi; ++rep) {
        std::int64_t L = 0;
        if (law.is_lattice()) {
          std::int64_t x = to_units_1d(law, start, "clt start");
          for (std::int64_t k = 0; k < n_steps; ++k) {
            const std::int64_t y = x + law.sample_units(rng);
            L += (x < 0) != (y < 0);
            x = y;
          }
        } else {
          double x = start;
          for (std::int64_t k = 0; k < n_steps; ++k) {
            const double y = x + law.sample_scalar(rng);
            L += (x < 0.0) != (y < 0.0);
            x = y;
          }
        }
        vals.push_back(scale * static_cast<double>(L));
      }
      return vals;
    });
    std::vector<double> all;
    for (auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
    const auto emp = EmpiricalDistribution::from_samples(std::move(all));
    const double sup = ks_statistic(emp, half_normal_cdf);
    const double mean = emp.mean();

    std::ostringstream nm;
    nm << "clt/" << law.describe() << "/start=" << start;
    auto r = base_report("clt_level_crossings", nm.str(), &law, opt);
    r.sizes = {{"n_steps", n_steps}, {"n_replicas", n_replicas}};
    r.statistic = sup;
    r.target = 0.0;
    r.tolerance = sup_tolerance;
    r.criterion = "sup|F_n - (2Phi-1)| <= tolerance and |mean - sqrt(2/pi)| <= mean_tolerance";
    r.effect_size = sup;
    r.within_tolerance = sup <= sup_tolerance && std::abs(mean - half_normal_mean) <= mean_tolerance;
    r.details["start"] = start;
    r.details["mean"] = mean;
    r.details["mean_target"] = half_normal_mean;
    r.details["mean_tolerance"] = mean_tolerance;
    r.details["mean_error"] = mean - half_normal_mean;
    r.details["start_over_sigma_sqrt_n"] = std::abs(start) / (std::sqrt(law.sigma2() * static_cast<double>(n_steps)));
    if (!csv_dir.empty()) {
      std::filesystem::create_directories(csv_dir);
      std::ostringstream fn;
      fn << csv_dir << "/clt_" << law.describe() << "_start" << start << ".csv";
      std::string path = fn.str();
      std::replace_if(path.begin() + static_cast<std::ptrdiff_t>(csv_dir.size()) + 1, path.end(),
                      [](char c) { return !(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-'); },
                      '_');
      std::ofstream csv(path);
      if (!provenance.empty()) csv << "# " << provenance << '\n';
      csv << "# law=" << law.describe() << " start=" << start << " n_steps=" << n_steps
          << " n_replicas=" << n_replicas << " seed=" << opt.seed << '\n';
      csv << "y,empirical_cdf,target_cdf\n";
      for (int k = 0; k <= 400; ++k) {
        const double y = 0.01 * k;
        csv << y << ',' << emp.cdf(y) << ',' << half_normal_cdf(y) << '\n';
      }
      r.details["csv"] = path;
    }
    r.runtime_s = seconds_since(t0);
    r.finalize();
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

// Excursions of a d = 1 lattice walk from x0 ~ source until T, the first
// up-crossing of 0 (upward) or first down-crossing (downward). Counts level
// crossings and window occupation over steps k < T.
struct ExcursionBlock {
  std::int64_t completed = 0;
  std::int64_t censored = 0;
  std::vector<double> up, down;  // per level, summed over completed excursions
  std::vector<double> occupation;  // per window point
};

struct ExcursionSpec {
  bool upward = true;
  std::vector<std::int64_t> levels;
  std::int64_t window_lo = 0, window_hi = -1;
};

std::vector<ExcursionBlock> run_excursions(const IncrementLaw& law, const MeasureSampler& source,
                                           const ExcursionSpec& spec, std::int64_t n, std::int64_t horizon,
                                           const RunOptions& opt, const RngStream& root) {
  const std::size_t L = spec.levels.size();
  const std::size_t W = static_cast<std::size_t>(std::max<std::int64_t>(0, spec.window_hi - spec.window_lo + 1));
  std::int64_t level_min = std::numeric_limits<std::int64_t>::max(), level_max = std::numeric_limits<std::int64_t>::min();
  for (auto a : spec.levels) {
    level_min = std::min(level_min, a);
    level_max = std::max(level_max, a);
  }
  return run_blocks(kBlocks, opt.threads, [&](std::size_t b) {
    RngStream rng = root.split(b);
    const auto [lo, hi] = block_range(n, b);
    ExcursionBlock blk;
    blk.up.assign(L, 0.0);
    blk.down.assign(L, 0.0);
    blk.occupation.assign(W, 0.0);
    std::vector<std::int64_t> up(L), down(L), occ(W);
    for (std::int64_t e = lo; e < hi; ++e) {
      std::int64_t x = to_units_1d(law, source.sample_scalar(rng), "excursion start");
      std::fill(up.begin(), up.end(), 0);
      std::fill(down.begin(), down.end(), 0);
      std::fill(occ.begin(), occ.end(), 0);
      bool done = false;
      for (std::int64_t k = 0; k < horizon; ++k) {
        if (x >= spec.window_lo && x <= spec.window_hi) ++occ[static_cast<std::size_t>(x - spec.window_lo)];
        const std::int64_t y = x + law.sample_units(rng);
        if (std::max(x, y) >= level_min && std::min(x, y) <= level_max) {
          for (std::size_t l = 0; l < L; ++l) {
            const std::int64_t a = spec.levels[l];
            up[l] += x < a && a <= y;
            down[l] += x >= a && a > y;
          }
        }
        const bool hit = spec.upward ? (x < 0 && y >= 0) : (x >= 0 && y < 0);
        x = y;
        if (hit) {
          done = true;
          break;
        }
      }
      if (!done) {
        ++blk.censored;
        continue;
      }
      ++blk.completed;
      for (std::size_t l = 0; l < L; ++l) {
        blk.up[l] += static_cast<double>(up[l]);
        blk.down[l] += static_cast<double>(down[l]);
      }
      for (std::size_t w = 0; w < W; ++w) blk.occupation[w] += static_cast<double>(occ[w]);
    }
    return blk;
  });
}

}  // namespace

std::vector<ExperimentReport> expected_crossings(const IncrementLaw& law, const std::vector<double>& levels,
                                                 std::int64_t n_excursions, std::int64_t horizon,
                                                 double tolerance, const RunOptions& opt) {
  require_walk_moments(law, "expected_crossings");
  require_lattice(law, "expected_crossings");
  ExcursionSpec spec;
  for (double a : levels) spec.levels.push_back(to_units_1d(law, a, "expected_crossings level"));
  std::vector<ExperimentReport> out;
  struct Side {
    const char* label;
    Measure start;
    bool upward;
  };
  Side sides[] = {{"pi_plus", pi_plus(law), true}, {"pi_minus", pi_minus(law), false}};
  for (auto& side : sides) {
    const auto t0 = Clock::now();
    spec.upward = side.upward;
    const MeasureSampler source(side.start);
    const RngStream root = RngStream(opt.seed).split("excursions").split(side.label);
    const auto blocks = run_excursions(law, source, spec, n_excursions, horizon, opt, root);
    const double secs = seconds_since(t0);
    std::int64_t completed = 0, censored = 0;
    for (const auto& b : blocks) {
      completed += b.completed;
      censored += b.censored;
    }
    for (std::size_t l = 0; l < levels.size(); ++l) {
      for (int dir = 0; dir < 2; ++dir) {
        std::vector<double> block_means;
        double total = 0.0;
        for (const auto& b : blocks) {
          const double s = dir == 0 ? b.up[l] : b.down[l];
          total += s;
          if (b.completed > 0) block_means.push_back(s / static_cast<double>(b.completed));
        }
        const double mom = block_means.empty() ? 0.0 : median_of_means(block_means, static_cast<int>(block_means.size()));
        std::ostringstream nm;
        nm << "crossings/" << law.describe() << '/' << side.label << "/a=" << levels[l] << '/'
           << (dir == 0 ? "up" : "down");
        auto r = base_report("expected_crossings", nm.str(), &law, opt);
        r.sizes = {{"n_excursions", n_excursions}, {"horizon", horizon}, {"blocks", kBlocks}};
        r.statistic = mom;
        r.target = 1.0;
        // Crossings of 0 in the direction that defines T happen exactly once.
        const bool exact = levels[l] == 0.0;
        r.tolerance = exact ? 0.0 : tolerance;
        r.criterion = exact ? "estimate == 1 exactly" : "|median_of_means - 1| <= tolerance";
        r.effect_size = std::abs(mom - 1.0);
        r.within_tolerance = r.effect_size <= r.tolerance;
        r.censor_rate = static_cast<double>(censored) / static_cast<double>(completed + censored);
        r.details["level"] = levels[l];
        r.details["direction"] = dir == 0 ? "up" : "down";
        r.details["start_measure"] = side.label;
        r.details["plain_mean"] = completed > 0 ? total / static_cast<double>(completed) : 0.0;
        r.details["completed"] = completed;
        r.details["censored"] = censored;
        r.runtime_s = secs;
        r.finalize();
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

ExperimentReport kac_mc_test(const IncrementLaw& law, double lo, double hi, std::int64_t n_excursions,
                             std::int64_t horizon, double tolerance, const RunOptions& opt) {
  const auto t0 = Clock::now();
  require_walk_moments(law, "kac_mc_test");
  require_lattice(law, "kac_mc_test");
  const double h = law.span();
  ExcursionSpec spec;
  spec.upward = true;
  spec.window_lo = static_cast<std::int64_t>(std::ceil(lo / h - 1e-9));
  spec.window_hi = static_cast<std::int64_t>(std::floor(hi / h + 1e-9));
  if (spec.window_hi < spec.window_lo) throw PreconditionError("kac_mc_test: empty window");
  const Measure plus = pi_plus(law);
  const double mass = *std::get<LatticeMeasure>(plus).total_mass;
  const MeasureSampler source(plus);
  const RngStream root = RngStream(opt.seed).split("kac");
  const auto blocks = run_excursions(law, source, spec, n_excursions, horizon, opt, root);
  std::int64_t completed = 0, censored = 0;
  std::vector<double> occ(static_cast<std::size_t>(spec.window_hi - spec.window_lo + 1), 0.0);
  for (const auto& b : blocks) {
    completed += b.completed;
    censored += b.censored;
    for (std::size_t w = 0; w < occ.size(); ++w) occ[w] += b.occupation[w];
  }
  std::ostringstream nm;
  nm << "kac/" << law.describe() << "/window=[" << lo << ',' << hi << ']';
  auto r = base_report("kac_mc", nm.str(), &law, opt);
  r.sizes = {{"n_excursions", n_excursions}, {"horizon", horizon}};
  double worst = 0.0;
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t w = 0; w < occ.size(); ++w) {
    const double est = completed > 0 ? occ[w] / static_cast<double>(completed) * mass : 0.0;
    const double rel = std::abs(est / h - 1.0);
    worst = std::max(worst, rel);
    pts.push_back({{"point", static_cast<double>(spec.window_lo + static_cast<std::int64_t>(w)) * h},
                   {"estimate", est},
                   {"relative_error", rel}});
  }
  r.statistic = worst;
  r.target = 0.0;
  r.tolerance = tolerance;
  r.criterion = "max_x |estimate(x)/h - 1| <= tolerance";
  r.effect_size = worst;
  r.within_tolerance = completed > 0 && worst <= tolerance;
  r.censor_rate = static_cast<double>(censored) / static_cast<double>(completed + censored);
  r.details["points"] = pts;
  r.details["pi_plus_mass"] = mass;
  r.details["h"] = h;
  r.details["completed"] = completed;
  r.details["censored"] = censored;
  r.runtime_s = seconds_since(t0);
  r.finalize();
  return r;
}

ExperimentReport hopf_ratio_test(const IncrementLaw& law, const std::vector<Point>& B1,
                                 const std::vector<Point>& B2, const Point& start, std::int64_t n_entrances,
                                 std::int64_t replicas, std::int64_t horizon, double tolerance,
                                 const RunOptions& opt) {
  const auto t0 = Clock::now();
  require_lattice(law, "hopf_ratio_test");
  if (law.dim() != 2) throw PreconditionError("hopf_ratio_test: requires d = 2");
  if (replicas < 1 || n_entrances < replicas) throw PreconditionError("hopf_ratio_test: bad sizes");
  const TargetSet A = TargetSet::nonnegative_orthant(2);
  if (!A.contains(start)) throw PreconditionError("hopf_ratio_test: start must lie in the quadrant");
  require_on_state_space(law, start);
  auto weight = [&](const std::vector<Point>& B) {
    double s = 0.0;
    for (const auto& x : B) {
      if (!A.contains(x)) throw PreconditionError("hopf_ratio_test: window point outside the quadrant");
      if (!law.space().contains(x)) throw PreconditionError("hopf_ratio_test: window point off the lattice");
      s += law.space().haar_unit * (1.0 - law.cdf_le(x));
    }
    return s;
  };
  const double w1 = weight(B1), w2 = weight(B2);
  if (!(w2 > 0.0)) throw PreconditionError("hopf_ratio_test: B2 has zero pi_+ mass");
  auto in = [](const std::vector<Point>& B, const Point& x) {
    for (const auto& p : B)
      if (std::abs(p[0] - x[0]) < 1e-9 && std::abs(p[1] - x[1]) < 1e-9) return true;
    return false;
  };
  struct Counts {
    std::int64_t c1 = 0, c2 = 0, entries = 0, censored = 0;
  };
  const RngStream root = RngStream(opt.seed).split("hopf");
  auto blocks = run_blocks(static_cast<std::size_t>(replicas), opt.threads, [&](std::size_t b) {
    RngStream rng = root.split(b);
    const auto [lo, hi] = block_range(n_entrances, b, static_cast<std::size_t>(replicas));
    Counts c;
    Point x = start;
    while (c.entries < hi - lo) {
      const auto e = entrance_sampler(law, A, x, horizon, rng);
      if (e.censored) {
        // The chain hit the cemetery; the replica restarts from `start`.
        ++c.censored;
        x = start;
        continue;
      }
      ++c.entries;
      x = e.entry_point;
      c.c1 += in(B1, x);
      c.c2 += in(B2, x);
    }
    return c;
  });
  Counts tot;
  for (const auto& c : blocks) {
    tot.c1 += c.c1;
    tot.c2 += c.c2;
    tot.entries += c.entries;
    tot.censored += c.censored;
  }
  auto r = base_report("hopf_ratio", "hopf/" + law.describe(), &law, opt);
  r.sizes = {{"n_entrances", n_entrances}, {"replicas", replicas}, {"horizon", horizon}};
  const double target = w1 / w2;
  const double ratio = tot.c2 > 0 ? static_cast<double>(tot.c1) / static_cast<double>(tot.c2)
                                  : std::numeric_limits<double>::infinity();
  r.statistic = ratio;
  r.target = target;
  r.tolerance = tolerance;
  r.criterion = "|ratio/target - 1| <= tolerance";
  r.effect_size = std::abs(ratio / target - 1.0);
  r.within_tolerance = tot.c2 > 0 && r.effect_size <= tolerance;
  r.censor_rate = static_cast<double>(tot.censored) / static_cast<double>(tot.entries + tot.censored);
  r.details["count_B1"] = tot.c1;
  r.details["count_B2"] = tot.c2;
  r.details["entries"] = tot.entries;
  r.details["censored"] = tot.censored;
  r.details["start"] = start;
  if (tot.c2 > 0 && replicas > 1) {
    // Delta-method error across replicas; entries within one replica are correlated.
    double ss = 0.0;
    for (const auto& c : blocks) {
      const double e = static_cast<double>(c.c1) - ratio * static_cast<double>(c.c2);
      ss += e * e;
    }
    const double R = static_cast<double>(replicas);
    r.details["ratio_std_error"] = std::sqrt(ss * R / (R - 1.0)) / static_cast<double>(tot.c2);
  }
  r.runtime_s = seconds_since(t0);
  r.finalize();
  return r;
}

namespace {

std::vector<std::vector<double>> rows_of(const Matrix& P) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(P.rows()));
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    for (Eigen::Index j = 0; j < P.cols(); ++j) rows[static_cast<std::size_t>(i)].push_back(P(i, j));
  return rows;
}

nlohmann::json partition_json(const Bipartition& p) { return {{"A", p.A}, {"Ac", p.Ac}}; }

}  // namespace

std::vector<ExperimentReport> cross_oracle(int n_chains, int n_states, std::int64_t samples_per_row,
                                           double tolerance, const RunOptions& opt) {
  const RngStream root = RngStream(opt.seed).split("cross_oracle");
  auto reports = run_blocks(static_cast<std::size_t>(n_chains), opt.threads, [&](std::size_t c) {
    const auto t0 = Clock::now();
    RngStream gen = root.split(c).split("chain");
    const Matrix P = random_irreducible_chain(n_states, gen);
    const Bipartition part = random_bipartition(n_states, gen);
    const auto Ke = entrance_kernel_exact(P, part);
    const auto Kx = exit_kernel_exact(P, part);
    const MarkovSampler sampler = MarkovSampler::finite(rows_of(P));
    std::vector<int> members = part.A;
    const TargetSet A = index_set(members, n_states);
    std::map<int, std::size_t> posA, posAc;
    for (std::size_t i = 0; i < part.A.size(); ++i) posA[part.A[i]] = i;
    for (std::size_t i = 0; i < part.Ac.size(); ++i) posAc[part.Ac[i]] = i;

    ExperimentReport r;
    r.experiment = "cross_oracle";
    r.name = "cross_oracle/chain" + std::to_string(c);
    r.seed = opt.seed;
    r.sizes = {{"samples_per_row", samples_per_row}, {"n_states", n_states}};
    std::int64_t censored = 0, total = 0;
    double worst = 0.0;
    nlohmann::json rows = nlohmann::json::array();
    for (int mode = 0; mode < 2; ++mode) {
      const bool entr = mode == 0;
      const SampledSubchain sub{sampler, A, entr ? SubchainMode::entrance : SubchainMode::exit, 1'000'000};
      const auto& states = entr ? part.A : part.Ac;
      const auto& K = entr ? Ke : Kx;
      const auto& pos = entr ? posA : posAc;
      for (std::size_t i = 0; i < states.size(); ++i) {
        RngStream rng = root.split(c).split(entr ? "entrance" : "exit").split(i);
        const Point x{static_cast<double>(states[i])};
        std::vector<double> counts(states.size() + 1, 0.0);
        const bool row_is_dagger = K.dagger(static_cast<Eigen::Index>(i)) > 1.0 - 1e-12;
        if (!entr && row_is_dagger) {
          // Outside A^c_ex: the sampler must report an exhausted rejection budget.
          bool raised = false;
          try {
            (void)exit_step(sub, x, rng);
          } catch (const RejectionBudgetExhausted&) {
            raised = true;
          }
          rows.push_back({{"mode", "exit"}, {"state", states[i]}, {"dagger_row", true}, {"budget_error", raised}});
          if (!raised) worst = std::max(worst, 1.0);
          continue;
        }
        for (std::int64_t k = 0; k < samples_per_row; ++k) {
          const auto y = entr ? entrance_step(sub, x, rng) : exit_step(sub, x, rng);
          if (!y) {
            ++censored;
            counts.back() += 1.0;
          } else {
            counts[pos.at(static_cast<int>((*y)[0]))] += 1.0;
          }
          ++total;
        }
        std::vector<double> emp(counts.size()), exact(counts.size());
        for (std::size_t j = 0; j < counts.size(); ++j) emp[j] = counts[j] / static_cast<double>(samples_per_row);
        for (std::size_t j = 0; j < states.size(); ++j)
          exact[j] = K.K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        exact.back() = std::max(0.0, K.dagger(static_cast<Eigen::Index>(i)));
        const double tv = total_variation(emp, exact);
        worst = std::max(worst, tv);
        rows.push_back({{"mode", entr ? "entrance" : "exit"}, {"state", states[i]}, {"tv", tv}});
      }
    }
    r.statistic = worst;
    r.target = 0.0;
    r.tolerance = tolerance;
    r.criterion = "max row TV(empirical, exact) <= tolerance";
    r.effect_size = worst;
    r.within_tolerance = worst <= tolerance;
    r.censor_rate = total > 0 ? static_cast<double>(censored) / static_cast<double>(total) : 0.0;
    r.details["rows"] = rows;
    r.details["partition"] = partition_json(part);
    r.runtime_s = seconds_since(t0);
    r.finalize();
    return r;
  });
  return reports;
}

namespace {

ExperimentReport identity_report(const FiniteChain& chain, const Bipartition& part, std::string name,
                                 const RunOptions& opt) {
  const auto t0 = Clock::now();
  ExperimentReport r;
  r.experiment = "finite_lab";
  r.name = std::move(name);
  r.seed = opt.seed;
  r.sizes = {{"n_states", chain.size()}};
  const auto checks = all_identity_checks(chain, part);
  double worst = 0.0;
  bool ok = true;
  nlohmann::json res = nlohmann::json::object();
  for (const auto& c : checks) {
    res[c.name] = {{"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass()}};
    worst = std::max(worst, c.residual);
    ok = ok && c.pass();
  }
  r.statistic = worst;
  r.target = 0.0;
  r.tolerance = 1e-10;
  r.criterion = "every identity residual <= its tolerance";
  r.effect_size = worst;
  r.within_tolerance = ok;
  r.details["identities"] = res;
  r.details["partition"] = partition_json(part);
  r.runtime_s = seconds_since(t0);
  r.finalize();
  return r;
}

}  // namespace

std::vector<ExperimentReport> finite_lab_suite(int n_chains, int n_states, const RunOptions& opt) {
  const RngStream root = RngStream(opt.seed).split("finite_lab");
  return run_blocks(static_cast<std::size_t>(n_chains), opt.threads, [&](std::size_t c) {
    RngStream rng = root.split(c);
    const Matrix P = random_irreducible_chain(n_states, rng);
    const Bipartition part = random_bipartition(n_states, rng);
    auto r = identity_report(FiniteChain::make(P), part, "finite_lab/chain" + std::to_string(c), opt);
    r.details["instance_seed"] = rng.seed();
    return r;
  });
}

ExperimentReport finite_lab_chain(const std::string& chain_text, const std::string& label,
                                  const RunOptions& opt) {
  const auto spec = parse_chain_text(chain_text);
  const FiniteChain chain = FiniteChain::make(spec.matrix(), spec.measure());
  const Bipartition part = Bipartition::from_A(spec.A, chain.size());
  return identity_report(chain, part, label, opt);
}

}  // namespace entrex
