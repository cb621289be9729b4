#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "entrex/increment_law.hpp"
#include "entrex/stat_verify.hpp"

namespace entrex {

/// Schema violation; `field` names the offending key, `line` is 1-based (0 if unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, std::size_t line, const std::string& msg);
  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

struct ExperimentConfig {
  std::string kind;
  std::string name;
  std::optional<IncrementLaw> law;
  std::map<std::string, std::int64_t> sizes;
  std::map<std::string, double> tolerances;
  std::vector<double> starts;
  std::vector<double> levels;
  double window_lo = 0.0, window_hi = 0.0;
  std::vector<Point> B1, B2;
  Point start;
  std::string chain_text;  // finite_lab on a given chain
  bool write_csv = true;

  std::int64_t size(const std::string& key) const { return sizes.at(key); }
  double tolerance(const std::string& key) const { return tolerances.at(key); }
};

struct RunConfig {
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = 1;
  std::string out_dir = "entrex-out";
  std::vector<ExperimentConfig> experiments;
  std::string source_text;  // hashed for provenance
};

/// Names accepted by `kind = ...`.
const std::vector<std::string>& experiment_kinds();

/// Parses a TOML experiment file. Throws ConfigError.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

/// Built-in suites: exact, mc-fast, mc-full. Throws ConfigError on unknown names.
RunConfig builtin_suite(const std::string& name);
const std::vector<std::string>& suite_names();

std::uint64_t config_hash(const RunConfig& cfg);

/// Seed of one experiment, derived from the master seed and its name only,
/// so it does not depend on ordering.
std::uint64_t experiment_seed(std::uint64_t master, const std::string& name);

std::vector<ExperimentReport> run_experiment(const ExperimentConfig& e, std::uint64_t master_seed,
                                             unsigned threads, const std::string& csv_dir,
                                             const std::string& provenance);

struct RunSummary {
  std::vector<ExperimentReport> reports;
  std::vector<std::string> errors;  // experiments that threw
  bool interrupted = false;
  bool all_pass() const;
};

/// Runs every experiment and writes <out>/report.jsonl, <out>/summary.txt and
/// CSVs. Stops scheduling new experiments once `stop` becomes true.
RunSummary run_config(const RunConfig& cfg, std::ostream& log, const std::atomic<bool>* stop = nullptr);

void print_summary(std::ostream& os, const RunSummary& s);

}  // namespace entrex
