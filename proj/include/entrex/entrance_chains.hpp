#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "entrex/increment_law.hpp"
#include "entrex/rng.hpp"
#include "entrex/target_set.hpp"

namespace entrex {

/// Raised when exit_step cannot draw a first step into A within its budget,
/// i.e. the state is (in practice) outside A^c_ex. Not the same as censoring.
class RejectionBudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time-homogeneous one-step sampler on a state space whose states are
/// encoded as points (finite chains use the 1-d point {i}).
class MarkovSampler {
 public:
  using Step = std::function<void(Point& state, RngStream& rng)>;

  MarkovSampler(int dim, Step step);

  /// Random walk with the given increment law. Keeps a reference to `law`.
  static MarkovSampler random_walk(const IncrementLaw& law);
  /// Finite chain with row-stochastic transition rows.
  static MarkovSampler finite(const std::vector<std::vector<double>>& rows);

  int dim() const noexcept { return dim_; }
  void step(Point& state, RngStream& rng) const { (*step_)(state, rng); }
  /// Present for random walks; enables the crossing-scan fast path.
  const IncrementLaw* walk_law() const noexcept { return law_; }
  /// Number of states for finite samplers, 0 otherwise.
  std::size_t finite_size() const noexcept { return finite_size_; }

 private:
  int dim_;
  std::shared_ptr<const Step> step_;
  const IncrementLaw* law_ = nullptr;
  std::size_t finite_size_ = 0;
};

/// Target set over the states {0, ..., n-1} of a finite sampler.
TargetSet index_set(const std::vector<int>& members, int n);

enum class SubchainMode { entrance, exit };

struct SampledSubchain {
  MarkovSampler sampler;
  TargetSet A;
  SubchainMode mode = SubchainMode::entrance;
  std::int64_t horizon = 1'000'000;            // underlying steps before dagger
  std::int64_t rejection_budget = 1'000'000;   // first-step draws for exit_step
};

/// nullopt stands for the cemetery state dagger.
using SubchainState = std::optional<Point>;

/// One step of the entrance chain: the position at the next A^c -> A
/// transition of the underlying chain started at x in A.
SubchainState entrance_step(const SampledSubchain& sub, const Point& x, RngStream& rng);

/// One step of the exit chain from x in A^c: condition the first step to land
/// in A (by rejection), then return the position just before the next entry
/// into A.
SubchainState exit_step(const SampledSubchain& sub, const Point& x, RngStream& rng);

struct SubchainRun {
  std::vector<SubchainState> states;
  std::int64_t censored = 0;  // number of steps that produced dagger
};

/// Iterates the subchain n times from x0; dagger is absorbing.
SubchainRun run_subchain(const SampledSubchain& sub, const Point& x0, std::int64_t n,
                         RngStream& rng);

/// Entrance and exit events read off one trajectory: entry indices k with
/// path[k-1] in A^c and path[k] in A. path[k-1] is the exit-chain state.
struct PathEntrance {
  std::int64_t index;
  Point entry;
  Point pre_entry;
};

std::vector<PathEntrance> entrances_along(const std::vector<Point>& path, const TargetSet& A);

}  // namespace entrex
