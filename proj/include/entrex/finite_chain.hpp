#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "entrex/rational.hpp"
#include "entrex/rng.hpp"

namespace entrex {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;  // measures are stored as column vectors, read as rows

class ChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ReducibleChain : public ChainError {
 public:
  ReducibleChain(const std::string& what, std::vector<std::vector<int>> classes)
      : ChainError(what), classes_(std::move(classes)) {}
  const std::vector<std::vector<int>>& classes() const noexcept { return classes_; }

 private:
  std::vector<std::vector<int>> classes_;
};

class SingularSolve : public ChainError {
 public:
  using ChainError::ChainError;
};

/// Throws ChainError unless P is square with rows summing to 1 within `tol`
/// and no negative entries.
void require_stochastic(const Matrix& P, double tol = 1e-12);

/// reach(i, j) iff j is reachable from i in zero or more steps.
std::vector<std::vector<char>> reachability(const Matrix& P);
/// Strongly connected components, each sorted, in order of first state.
std::vector<std::vector<int>> communicating_classes(const Matrix& P);
bool is_irreducible(const Matrix& P);

/// Unique invariant probability vector of an irreducible P, from the
/// bordered system; throws ReducibleChain otherwise.
Vector stationary_vector(const Matrix& P);

struct FiniteChain {
  Matrix P;
  Vector mu;
  std::vector<std::string> labels;

  int size() const noexcept { return static_cast<int>(P.rows()); }

  /// Validates P; computes mu when not supplied (P must then be irreducible).
  static FiniteChain make(Matrix P, std::optional<Vector> mu = std::nullopt);
};

struct Bipartition {
  std::vector<int> A;
  std::vector<int> Ac;

  /// Builds (A, complement) over n states; both parts must be nonempty.
  static Bipartition from_A(std::vector<int> A, int n);
};

/// P-hat(y, x) = mu(x) P(x, y) / mu(y).
Matrix dual_kernel(const Matrix& P, const Vector& mu);
inline Matrix dual_kernel(const FiniteChain& c) { return dual_kernel(c.P, c.mu); }

/// Kernel with an explicit cemetery column: rows of K plus missing mass.
struct KernelWithDagger {
  Matrix K;
  Vector dagger;
};

Matrix submatrix(const Matrix& M, const std::vector<int>& rows, const std::vector<int>& cols);

/// First-passage kernel from states in `from` to first hit in `to`
/// ((I - P_ff)^{-1} P_ft); rows that cannot reach `to` lose mass to dagger.
KernelWithDagger first_hit_kernel(const Matrix& P, const std::vector<int>& from,
                                  const std::vector<int>& to);
/// Expected visits (I - P_ff)^{-1} restricted to states that can leave `from`
/// towards `to`; rows of trapped states are zero.
Matrix green_kernel(const Matrix& P, const std::vector<int>& from, const std::vector<int>& to);

/// K_entr = G H over A.
KernelWithDagger entrance_kernel_exact(const Matrix& P, const Bipartition& part);
/// K_exit over A^c; rows with P(x, A) = 0 go entirely to dagger.
KernelWithDagger exit_kernel_exact(const Matrix& P, const Bipartition& part);

/// mu_A^entr(y) = sum_{x in A^c} mu(x) P(x, y), y in A.
Vector entrance_measure(const Matrix& P, const Vector& mu, const Bipartition& part);
/// mu_{A^c}^exit(x) = mu(x) P(x, A), x in A^c.
Vector exit_measure(const Matrix& P, const Vector& mu, const Bipartition& part);
/// mu(x) P-hat(x, A^c), x in A: the dual-kernel form of mu_A^entr.
Vector entrance_measure_dual_form(const Matrix& P, const Vector& mu, const Bipartition& part);

/// ||nu K - nu||_inf.
double verify_invariance(const Vector& nu, const Matrix& K);

/// Occupation before the next entrance into A, on the doubled space
/// (state, visited-A^c flag). occupation(a, b) = E_a[sum_{k<T} 1(Y_k = b)].
struct KacResult {
  Matrix occupation;     // |A| x n
  Vector reconstruction; // sum_a weights(a) occupation(a, .)
};

KacResult kac_occupation(const Matrix& P, const Bipartition& part, const Vector& weights_on_A);
KacResult kac_reconstruct(const FiniteChain& chain, const Bipartition& part);

struct IdentityCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass() const noexcept { return residual <= tolerance; }
};

/// Push-forward mu_A^entr G = mu_{A^c}^entr and the two-term split of mu.
std::vector<IdentityCheck> kac_split_check(const FiniteChain& chain, const Bipartition& part);
/// Detailed balance between the exit chain and the dual entrance chain into
/// A^c, between the entrance chain into A and the dual exit chain, and the
/// alternation of entrance measures under G and H.
std::vector<IdentityCheck> duality_check(const FiniteChain& chain, const Bipartition& part);

struct ReverseInducing {
  Vector nu;            // stationary vector of K_entr
  Vector mu;            // occupation measure generated by nu
  double invariance_residual = 0.0;   // ||mu P - mu||_inf
  double entrance_residual = 0.0;     // ||entrance_measure(mu) - nu||_inf
  double proportionality_residual = 0.0;  // mu vs chain.mu after rescaling
  bool simple_unit_eigenvalue = false;
};

ReverseInducing reverse_inducing(const FiniteChain& chain, const Bipartition& part);
std::vector<IdentityCheck> reverse_inducing_check(const FiniteChain& chain, const Bipartition& part);

/// Every identity of the exact lab for one (chain, partition).
std::vector<IdentityCheck> all_identity_checks(const FiniteChain& chain, const Bipartition& part);

/// Random irreducible chain: flat-simplex rows, entries below `threshold`
/// zeroed and rows renormalized; redrawn until irreducible.
Matrix random_irreducible_chain(int n, RngStream& rng, double threshold = 1e-3);
Bipartition random_bipartition(int n, RngStream& rng);

/// Structured text form of a chain:
///   n 3
///   P
///   0 1 0
///   ...
///   mu 1/3 1/3 1/3     (optional)
///   A 1 2
/// '#' starts a comment. Entries may be decimals or p/q rationals.
struct ChainSpec {
  std::vector<std::vector<Rational>> P;
  std::optional<std::vector<Rational>> mu;
  std::vector<int> A;

  Matrix matrix() const;
  std::optional<Vector> measure() const;
};

ChainSpec parse_chain_text(std::string_view text);

}  // namespace entrex
