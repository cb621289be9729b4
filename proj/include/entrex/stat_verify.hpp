#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "entrex/increment_law.hpp"
#include "entrex/measures.hpp"
#include "entrex/target_set.hpp"

namespace entrex {

/// Seeded, reproducible record of one verification.
struct ExperimentReport {
  std::string experiment;  // kind, e.g. "lln_overshoots"
  std::string name;        // instance label
  std::string law;
  std::uint64_t seed = 0;
  nlohmann::json sizes = nlohmann::json::object();
  double statistic = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::string criterion;   // how statistic, target and tolerance combine
  double censor_rate = 0.0;
  double effect_size = 0.0;
  bool within_tolerance = false;
  bool pass = false;
  double runtime_s = 0.0;
  nlohmann::json details = nlohmann::json::object();

  /// pass = within_tolerance && censor_rate <= kMaxCensorRate.
  void finalize();
  /// "pass", "fail", or "censored" when the censor gate voided the run.
  std::string verdict() const;
  /// Wall time is left out unless asked for, so records stay bit-exact.
  nlohmann::json to_json(bool with_runtime = false) const;
};

inline constexpr double kMaxCensorRate = 1e-3;

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// One entrance step into A = [0, inf) from x ~ pi_+', compared with pi_+'.
/// Continuous laws: KS against the analytic CDF. Lattice laws: chi-square
/// (p > 0.01) with TV reported.
ExperimentReport stationarity_test(const IncrementLaw& law, std::int64_t n_samples,
                                   std::int64_t horizon, const RunOptions& opt);

/// pi_-' -> first entrance into [0, inf) lands in pi_+', and pi_+' -> first
/// entrance into (-inf, 0) lands in pi_-'. One report per direction.
std::vector<ExperimentReport> alternation_test(const IncrementLaw& law, std::int64_t n_samples,
                                               std::int64_t horizon, const RunOptions& opt);

/// (1/n) sum |O_k| over the first n crossings of one path per start,
/// relative error against sigma^2 / (2 E|X_1|).
std::vector<ExperimentReport> lln_overshoots(const IncrementLaw& law, const std::vector<double>& starts,
                                             std::int64_t n_crossings, std::int64_t max_steps,
                                             double tolerance, const RunOptions& opt);

/// sigma L_n / (E|X_1| sqrt n) over replicas against 2 Phi(y) - 1: sup
/// distance and mean vs sqrt(2/pi). `csv_dir` (if nonempty) receives a
/// y-grid CSV per start.
std::vector<ExperimentReport> clt_level_crossings(const IncrementLaw& law, const std::vector<double>& starts,
                                                  std::int64_t n_steps, std::int64_t n_replicas,
                                                  double sup_tolerance, double mean_tolerance,
                                                  const RunOptions& opt, const std::string& csv_dir = {},
                                                  const std::string& provenance = {});

/// E L_T^up(a), E L_T^down(a) for starts ~ pi_+' (T = first up-crossing of 0)
/// and ~ pi_-' (T = first down-crossing), median of means over 100 blocks.
std::vector<ExperimentReport> expected_crossings(const IncrementLaw& law, const std::vector<double>& levels,
                                                 std::int64_t n_excursions, std::int64_t horizon,
                                                 double tolerance, const RunOptions& opt);

/// Occupation of each lattice point of [lo, hi] before the next entrance
/// into [0, inf), started from pi_+', times total(pi_+), against lambda = h.
ExperimentReport kac_mc_test(const IncrementLaw& law, double lo, double hi, std::int64_t n_excursions,
                             std::int64_t horizon, double tolerance, const RunOptions& opt);

/// Entrance chain into [0, inf)^2 from `start`, pooled over replicas that
/// each produce n_entrances / replicas entries; count(B1) / count(B2) vs
/// pi_+(B1) / pi_+(B2).
ExperimentReport hopf_ratio_test(const IncrementLaw& law, const std::vector<Point>& B1,
                                 const std::vector<Point>& B2, const Point& start,
                                 std::int64_t n_entrances, std::int64_t replicas, std::int64_t horizon,
                                 double tolerance, const RunOptions& opt);

/// Empirical entrance/exit kernels from the sampled subchains vs the exact
/// finite-lab kernels, max row TV per chain.
std::vector<ExperimentReport> cross_oracle(int n_chains, int n_states, std::int64_t samples_per_row,
                                           double tolerance, const RunOptions& opt);

/// All exact identities on random irreducible chains, one report per chain.
std::vector<ExperimentReport> finite_lab_suite(int n_chains, int n_states, const RunOptions& opt);

/// All exact identities on one chain given as structured text.
ExperimentReport finite_lab_chain(const std::string& chain_text, const std::string& label,
                                  const RunOptions& opt);

}  // namespace entrex
