#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "entrex/increment_law.hpp"
#include "entrex/rng.hpp"
#include "entrex/target_set.hpp"

namespace entrex {

class WalkError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lazy trajectory S_0, S_1, ..., S_n of a random walk. Keeps a pointer to
/// the law, which must outlive the stream.
///
/// Lattice walks are carried in integer span units so long runs do not
/// accumulate rounding error; `position()` converts on demand.
class WalkStream {
 public:
  WalkStream(const IncrementLaw& law, Point start, std::int64_t n_steps, RngStream rng);

  /// Advances to the next position. Returns false once S_n has been yielded.
  bool next();
  /// Index of the current position (-1 before the first call to next()).
  std::int64_t index() const noexcept { return index_; }
  const Point& position() const noexcept { return pos_; }
  std::int64_t n_steps() const noexcept { return n_steps_; }

 private:
  const IncrementLaw* law_;
  std::int64_t n_steps_;
  std::int64_t index_ = -1;
  RngStream rng_;
  LatticePoint units_;
  Point pos_;
};

/// Checks that `start` lies in the state space of `law`; throws WalkError if not.
void require_on_state_space(const IncrementLaw& law, std::span<const double> start);

WalkStream simulate_walk(const IncrementLaw& law, Point start, std::int64_t n_steps,
                         RngStream rng);

/// Materializes a d = 1 path (fixtures and small runs only).
std::vector<double> collect_path_1d(const IncrementLaw& law, double start, std::int64_t n_steps,
                                    RngStream rng);

/// Zero-level crossing structure of a d = 1 path. Zero is in the nonnegative class.
struct CrossingTrace {
  std::vector<std::int64_t> times;   // T_1 < T_2 < ...
  std::vector<double> overshoots;    // S_{T_k}
  std::vector<double> undershoots;   // S_{T_k - 1}
  std::int64_t n_steps = 0;
  bool start_negative = false;       // 1(S_0 < 0)

  std::size_t size() const noexcept { return times.size(); }
  /// L(n) = #{k : T_k <= n}.
  std::int64_t count_until(std::int64_t n) const;
};

inline bool nonnegative_class(double x) noexcept { return x >= 0.0; }

CrossingTrace extract_crossings(std::span<const double> path);
/// Overload for generic-dimension paths; throws WalkError unless d = 1.
CrossingTrace extract_crossings(std::span<const Point> path);

struct UpcrossingChain {
  std::vector<double> overshoots;   // O_n >= 0
  std::vector<double> undershoots;  // U_n < 0
};

UpcrossingChain upcrossing_subchain(const CrossingTrace& trace);
/// O^down_n < 0.
std::vector<double> downcrossing_subchain(const CrossingTrace& trace);

struct LevelCrossingCount {
  double level = 0.0;
  std::int64_t up = 0;    // #{i : S_i < a <= S_{i+1}}
  std::int64_t down = 0;  // #{i : S_i >= a > S_{i+1}}
};

std::vector<LevelCrossingCount> count_level_crossings(std::span<const double> path,
                                                      std::span<const double> levels);

/// One entrance of the walk into A: the first k >= 1 with S_{k-1} in A^c and
/// S_k in A. `censored` marks that max_steps ran out first.
struct EntranceEvent {
  std::int64_t entry_index = 0;
  Point entry_point;
  Point pre_exit_point;
  bool censored = false;
};

EntranceEvent entrance_sampler(const IncrementLaw& law, const TargetSet& A, const Point& start,
                               std::int64_t max_steps, RngStream& rng);

/// Threshold scan in d = 1: first k >= 1 with S_{k-1} < c <= S_k
/// (`upward`) or S_{k-1} >= c > S_k (downward).
struct ScanResult {
  std::int64_t steps = 0;
  double entry = 0.0;
  double pre = 0.0;
  bool censored = false;
};

ScanResult scan_crossing_1d(const IncrementLaw& law, double start, double c, bool upward,
                            std::int64_t max_steps, RngStream& rng);

/// Count and |overshoot| sum over the first zero-level crossings of one d = 1 path.
struct CrossingRun {
  std::int64_t crossings = 0;
  std::int64_t steps = 0;  // walk time at the last crossing, or max_steps
  double sum_abs_overshoot = 0.0;
};

/// Follows the walk from `start` until its n-th zero-level crossing or until
/// max_steps. Stretches that cannot change sign are crossed in one draw:
/// lattice laws jump k steps by a multinomial count of atoms whenever k steps
/// cannot reach the other side; Gaussian laws bisect Brownian bridges and
/// drop a sub-interval once the bridge reaches zero with probability below
/// e^-40. Other laws step one at a time.
CrossingRun run_to_crossings(const IncrementLaw& law, double start, std::int64_t n_crossings,
                             std::int64_t max_steps, RngStream& rng);

/// Writes S_0..S_n as little-endian doubles (d values per position) to
/// `bin_path` and a text sidecar `bin_path + ".hdr"` with law, seed, start, n.
void dump_trajectory(const IncrementLaw& law, const Point& start, std::int64_t n_steps,
                     const RngStream& rng, const std::string& bin_path);

/// Reads back a dump written by dump_trajectory.
std::vector<double> read_trajectory(const std::string& bin_path);

/// CSV with columns index,time,overshoot,undershoot; `preamble` lines are
/// written first, each prefixed with "# ".
void write_crossings_csv(std::ostream& os, const CrossingTrace& trace,
                         std::span<const std::string> preamble = {});

}  // namespace entrex
