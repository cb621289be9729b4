#include "entrex/finite_chain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace entrex {

namespace {

constexpr double kIdentityTol = 1e-10;
constexpr double kInvolutionTol = 1e-12;
constexpr double kRcondFloor = 1e-13;

Matrix solve_left(const Matrix& IminusQ, const Matrix& rhs, const char* what) {
  Eigen::PartialPivLU<Matrix> lu(IminusQ);
  if (!(lu.rcond() > kRcondFloor))
    throw SingularSolve(std::string(what) + ": singular (I - Q) block");
  return lu.solve(rhs);
}

// States of `from` that can reach `to`, moving inside `from` before the last step.
std::vector<char> can_reach(const Matrix& P, const std::vector<int>& from,
                            const std::vector<int>& to) {
  std::vector<char> ok(from.size(), 0);
  bool changed = true;
  for (std::size_t i = 0; i < from.size(); ++i)
    for (int t : to)
      if (P(from[i], t) > 0.0) ok[i] = 1;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < from.size(); ++i) {
      if (ok[i]) continue;
      for (std::size_t j = 0; j < from.size(); ++j)
        if (ok[j] && P(from[i], from[j]) > 0.0) {
          ok[i] = 1;
          changed = true;
          break;
        }
    }
  }
  return ok;
}

std::vector<int> positions_where(const std::vector<char>& flags) {
  std::vector<int> out;
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (flags[i]) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> pick(const std::vector<int>& v, const std::vector<int>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(v[static_cast<std::size_t>(i)]);
  return out;
}

Bipartition swapped(const Bipartition& p) { return {p.Ac, p.A}; }

Vector restrict_to(const Vector& v, const std::vector<int>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(idx[i]);
  return out;
}

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }
double inf_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Unique invariant probability vector, if the unit eigenvalue is simple.
std::optional<Vector> unique_invariant(const Matrix& K) {
  const Eigen::Index m = K.rows();
  Matrix M(m + 1, m);
  M.topRows(m) = K.transpose() - Matrix::Identity(m, m);
  M.row(m).setOnes();
  Vector rhs = Vector::Zero(m + 1);
  rhs(m) = 1.0;
  Eigen::ColPivHouseholderQR<Matrix> qr(M);
  qr.setThreshold(1e-10);
  if (qr.rank() < m) return std::nullopt;
  Vector v = qr.solve(rhs);
  return v;
}

}  // namespace

void require_stochastic(const Matrix& P, double tol) {
  if (P.rows() == 0 || P.rows() != P.cols()) throw ChainError("transition matrix must be square and nonempty");
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    if ((P.row(i).array() < 0.0).any())
      throw ChainError("negative entry in row " + std::to_string(i));
    if (!P.row(i).allFinite()) throw ChainError("non-finite entry in row " + std::to_string(i));
    const double s = P.row(i).sum();
    if (std::abs(s - 1.0) > tol) {
      std::ostringstream os;
      os << "row " << i << " sums to " << s;
      throw ChainError(os.str());
    }
  }
}

std::vector<std::vector<char>> reachability(const Matrix& P) {
  const int n = static_cast<int>(P.rows());
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    r[i][i] = 1;
    for (int j = 0; j < n; ++j)
      if (P(i, j) > 0.0) r[i][j] = 1;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (r[i][k])
        for (int j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = 1;
  return r;
}

std::vector<std::vector<int>> communicating_classes(const Matrix& P) {
  const auto r = reachability(P);
  const int n = static_cast<int>(P.rows());
  std::vector<int> cls(n, -1);
  std::vector<std::vector<int>> out;
  for (int i = 0; i < n; ++i) {
    if (cls[i] >= 0) continue;
    std::vector<int> c;
    for (int j = i; j < n; ++j)
      if (r[i][j] && r[j][i]) {
        cls[j] = static_cast<int>(out.size());
        c.push_back(j);
      }
    out.push_back(std::move(c));
  }
  return out;
}

bool is_irreducible(const Matrix& P) { return communicating_classes(P).size() == 1; }

Vector stationary_vector(const Matrix& P) {
  require_stochastic(P);
  auto classes = communicating_classes(P);
  if (classes.size() != 1)
    throw ReducibleChain("chain is reducible (" + std::to_string(classes.size()) +
                             " communicating classes)",
                         std::move(classes));
  auto v = unique_invariant(P);
  if (!v) throw SingularSolve("stationary_vector: bordered system is rank deficient");
  return *v;
}

FiniteChain FiniteChain::make(Matrix P, std::optional<Vector> mu) {
  require_stochastic(P);
  FiniteChain c;
  if (mu) {
    if (mu->size() != P.rows()) throw ChainError("mu has the wrong length");
    if ((mu->array() < 0.0).any() || mu->sum() <= 0.0)
      throw ChainError("mu must be nonnegative and nonzero");
    const double res = inf_norm(Vector(P.transpose() * *mu - *mu));
    if (res > 1e-10) throw ChainError("supplied mu is not invariant for P");
    c.mu = *mu;
  } else {
    c.mu = stationary_vector(P);
  }
  c.P = std::move(P);
  for (int i = 0; i < c.size(); ++i) c.labels.push_back("s" + std::to_string(i));
  return c;
}

Bipartition Bipartition::from_A(std::vector<int> A, int n) {
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (int a : A) {
    if (a < 0 || a >= n) throw ChainError("partition index " + std::to_string(a) + " out of range");
    if (in[a]) throw ChainError("partition index " + std::to_string(a) + " repeated");
    in[a] = 1;
  }
  Bipartition p;
  for (int i = 0; i < n; ++i) (in[i] ? p.A : p.Ac).push_back(i);
  if (p.A.empty() || p.Ac.empty()) throw ChainError("both A and A^c must be nonempty");
  return p;
}

Matrix dual_kernel(const Matrix& P, const Vector& mu) {
  if ((mu.array() <= 0.0).any()) throw ChainError("dual_kernel: mu has a zero entry");
  const Eigen::Index n = P.rows();
  Matrix D(n, n);
  for (Eigen::Index y = 0; y < n; ++y)
    for (Eigen::Index x = 0; x < n; ++x) D(y, x) = mu(x) * P(x, y) / mu(y);
  return D;
}

Matrix submatrix(const Matrix& M, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = M(rows[i], cols[j]);
  return out;
}

KernelWithDagger first_hit_kernel(const Matrix& P, const std::vector<int>& from,
                                  const std::vector<int>& to) {
  const auto ok = can_reach(P, from, to);
  const auto live = positions_where(ok);
  const auto R = pick(from, live);
  KernelWithDagger out;
  out.K = Matrix::Zero(static_cast<Eigen::Index>(from.size()), static_cast<Eigen::Index>(to.size()));
  if (!R.empty()) {
    const Eigen::Index r = static_cast<Eigen::Index>(R.size());
    const Matrix X = solve_left(Matrix::Identity(r, r) - submatrix(P, R, R), submatrix(P, R, to),
                                "first_hit_kernel");
    for (std::size_t i = 0; i < live.size(); ++i) out.K.row(live[i]) = X.row(static_cast<Eigen::Index>(i));
  }
  out.dagger = Vector::Ones(out.K.rows()) - out.K.rowwise().sum();
  return out;
}

Matrix green_kernel(const Matrix& P, const std::vector<int>& from, const std::vector<int>& to) {
  const auto ok = can_reach(P, from, to);
  const auto live = positions_where(ok);
  const auto R = pick(from, live);
  const Eigen::Index f = static_cast<Eigen::Index>(from.size());
  Matrix N = Matrix::Zero(f, f);
  if (R.empty()) return N;
  const Eigen::Index r = static_cast<Eigen::Index>(R.size());
  const Matrix X = solve_left(Matrix::Identity(r, r) - submatrix(P, R, R), Matrix::Identity(r, r),
                              "green_kernel");
  for (std::size_t i = 0; i < live.size(); ++i)
    for (std::size_t j = 0; j < live.size(); ++j)
      N(live[i], live[j]) = X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return N;
}

KernelWithDagger entrance_kernel_exact(const Matrix& P, const Bipartition& part) {
  const auto G = first_hit_kernel(P, part.A, part.Ac);
  const auto H = first_hit_kernel(P, part.Ac, part.A);
  KernelWithDagger out;
  out.K = G.K * H.K;
  out.dagger = Vector::Ones(out.K.rows()) - out.K.rowwise().sum();
  return out;
}

KernelWithDagger exit_kernel_exact(const Matrix& P, const Bipartition& part) {
  const auto G = first_hit_kernel(P, part.A, part.Ac);
  const Matrix Ncc = green_kernel(P, part.Ac, part.A);
  const Matrix PcA = submatrix(P, part.Ac, part.A);
  const Vector toA = PcA.rowwise().sum();
  const Matrix W = G.K * Ncc * toA.asDiagonal();  // |A| x |A^c|
  KernelWithDagger out;
  const Eigen::Index m = static_cast<Eigen::Index>(part.Ac.size());
  out.K = Matrix::Zero(m, m);
  for (Eigen::Index x = 0; x < m; ++x)
    if (toA(x) > 0.0) out.K.row(x) = (PcA.row(x) / toA(x)) * W;
  out.dagger = Vector::Ones(m) - out.K.rowwise().sum();
  return out;
}

Vector entrance_measure(const Matrix& P, const Vector& mu, const Bipartition& part) {
  return submatrix(P, part.Ac, part.A).transpose() * restrict_to(mu, part.Ac);
}

Vector exit_measure(const Matrix& P, const Vector& mu, const Bipartition& part) {
  const Vector toA = submatrix(P, part.Ac, part.A).rowwise().sum();
  return restrict_to(mu, part.Ac).cwiseProduct(toA);
}

Vector entrance_measure_dual_form(const Matrix& P, const Vector& mu, const Bipartition& part) {
  const Matrix D = dual_kernel(P, mu);
  const Vector toAc = submatrix(D, part.A, part.Ac).rowwise().sum();
  return restrict_to(mu, part.A).cwiseProduct(toAc);
}

double verify_invariance(const Vector& nu, const Matrix& K) {
  if (K.rows() != nu.size() || K.cols() != nu.size())
    throw ChainError("verify_invariance: dimension mismatch");
  return inf_norm(Vector(K.transpose() * nu - nu));
}

KacResult kac_occupation(const Matrix& P, const Bipartition& part, const Vector& weights_on_A) {
  const Eigen::Index m = static_cast<Eigen::Index>(part.A.size());
  const Eigen::Index c = static_cast<Eigen::Index>(part.Ac.size());
  const Eigen::Index n = m + c;
  if (weights_on_A.size() != m) throw ChainError("kac_occupation: weights must live on A");
  // Phase 0: in A, A^c not yet visited. Phase 1: in A^c. Entering A from
  // phase 1 is the next entrance and is absorbing.
  Matrix Q = Matrix::Zero(n, n);
  Q.topLeftCorner(m, m) = submatrix(P, part.A, part.A);
  Q.topRightCorner(m, c) = submatrix(P, part.A, part.Ac);
  Q.bottomRightCorner(c, c) = submatrix(P, part.Ac, part.Ac);
  Eigen::PartialPivLU<Matrix> lu(Matrix(Matrix::Identity(n, n) - Q).transpose());
  if (!(lu.rcond() > kRcondFloor)) throw SingularSolve("kac_occupation: singular doubled-space solve");
  KacResult out;
  out.occupation = Matrix::Zero(m, P.rows());
  for (Eigen::Index a = 0; a < m; ++a) {
    const Vector row = lu.solve(Vector::Unit(n, a));
    for (Eigen::Index i = 0; i < m; ++i) out.occupation(a, part.A[i]) = row(i);
    for (Eigen::Index j = 0; j < c; ++j) out.occupation(a, part.Ac[j]) = row(m + j);
  }
  out.reconstruction = out.occupation.transpose() * weights_on_A;
  return out;
}

KacResult kac_reconstruct(const FiniteChain& chain, const Bipartition& part) {
  if (!is_irreducible(chain.P))
    throw ReducibleChain("kac_reconstruct requires an irreducible chain", communicating_classes(chain.P));
  return kac_occupation(chain.P, part, entrance_measure(chain.P, chain.mu, part));
}

std::vector<IdentityCheck> kac_split_check(const FiniteChain& chain, const Bipartition& part) {
  const Vector eA = entrance_measure(chain.P, chain.mu, part);
  const Vector eAc = entrance_measure(chain.P, chain.mu, swapped(part));
  const auto G = first_hit_kernel(chain.P, part.A, part.Ac);
  const Vector pushed = G.K.transpose() * eA;
  const Vector inA = green_kernel(chain.P, part.A, part.Ac).transpose() * eA;
  const Vector inAc = green_kernel(chain.P, part.Ac, part.A).transpose() * eAc;
  Vector split(chain.size());
  for (std::size_t i = 0; i < part.A.size(); ++i) split(part.A[i]) = inA(static_cast<Eigen::Index>(i));
  for (std::size_t j = 0; j < part.Ac.size(); ++j) split(part.Ac[j]) = inAc(static_cast<Eigen::Index>(j));
  return {
      {"kac_pushforward", inf_norm(Vector(pushed - eAc)), kIdentityTol},
      {"kac_split", inf_norm(Vector(split - chain.mu)), kIdentityTol},
  };
}

std::vector<IdentityCheck> duality_check(const FiniteChain& chain, const Bipartition& part) {
  const Matrix D = dual_kernel(chain);
  const Bipartition sw = swapped(part);
  std::vector<IdentityCheck> out;

  const Vector mexit = exit_measure(chain.P, chain.mu, part);
  const Matrix Kexit = exit_kernel_exact(chain.P, part).K;
  const Matrix KdualEntrAc = entrance_kernel_exact(D, sw).K;
  const Matrix flux1 = mexit.asDiagonal() * Kexit;
  const Matrix flux1r = (mexit.asDiagonal() * KdualEntrAc).transpose();
  out.push_back({"detailed_balance_exit", inf_norm(Matrix(flux1 - flux1r)), kIdentityTol});

  const Vector mentr = entrance_measure(chain.P, chain.mu, part);
  const Matrix Kentr = entrance_kernel_exact(chain.P, part).K;
  const Matrix KdualExitA = exit_kernel_exact(D, sw).K;
  const Matrix flux2 = mentr.asDiagonal() * Kentr;
  const Matrix flux2r = (mentr.asDiagonal() * KdualExitA).transpose();
  out.push_back({"detailed_balance_entrance", inf_norm(Matrix(flux2 - flux2r)), kIdentityTol});

  out.push_back({"entrance_dual_form",
                 inf_norm(Vector(mentr - entrance_measure_dual_form(chain.P, chain.mu, part))),
                 kIdentityTol});

  const Vector mentrAc = entrance_measure(chain.P, chain.mu, sw);
  const Matrix G = first_hit_kernel(chain.P, part.A, part.Ac).K;
  const Matrix H = first_hit_kernel(chain.P, part.Ac, part.A).K;
  out.push_back({"alternation_A_to_Ac", inf_norm(Vector(G.transpose() * mentr - mentrAc)), kIdentityTol});
  out.push_back({"alternation_Ac_to_A", inf_norm(Vector(H.transpose() * mentrAc - mentr)), kIdentityTol});

  out.push_back({"dual_involution", inf_norm(Matrix(dual_kernel(D, chain.mu) - chain.P)), kInvolutionTol});
  out.push_back({"dual_stochastic", inf_norm(Vector(D.rowwise().sum() - Vector::Ones(D.rows()))),
                 kInvolutionTol});
  return out;
}

ReverseInducing reverse_inducing(const FiniteChain& chain, const Bipartition& part) {
  const Matrix K = entrance_kernel_exact(chain.P, part).K;
  const Eigen::Index m = K.rows();
  ReverseInducing r;
  // K is stochastic, so an absolute cut on singular values of K - I is scale-free.
  Eigen::JacobiSVD<Matrix> svd(Matrix(K - Matrix::Identity(m, m)));
  const auto& sv = svd.singularValues();
  r.simple_unit_eigenvalue = (sv.array() <= 1e-9).count() == 1;
  auto nu = unique_invariant(K);
  if (!nu || !r.simple_unit_eigenvalue)
    throw ReducibleChain("entrance kernel has a repeated unit eigenvalue", communicating_classes(K));
  r.nu = *nu;
  r.mu = kac_occupation(chain.P, part, r.nu).reconstruction;
  r.invariance_residual = inf_norm(Vector(chain.P.transpose() * r.mu - r.mu));
  r.entrance_residual = inf_norm(Vector(entrance_measure(chain.P, r.mu, part) - r.nu));
  r.proportionality_residual =
      inf_norm(Vector(r.mu / r.mu.sum() - chain.mu / chain.mu.sum()));
  return r;
}

std::vector<IdentityCheck> reverse_inducing_check(const FiniteChain& chain, const Bipartition& part) {
  const auto r = reverse_inducing(chain, part);
  return {
      {"reverse_inducing_invariance", r.invariance_residual, kIdentityTol},
      {"reverse_inducing_entrance", r.entrance_residual, kIdentityTol},
      {"reverse_inducing_proportional", r.proportionality_residual, kIdentityTol},
      {"simple_unit_eigenvalue", r.simple_unit_eigenvalue ? 0.0 : 1.0, 0.0},
  };
}

std::vector<IdentityCheck> all_identity_checks(const FiniteChain& chain, const Bipartition& part) {
  std::vector<IdentityCheck> out;
  const auto Ke = entrance_kernel_exact(chain.P, part);
  const auto Kx = exit_kernel_exact(chain.P, part);
  const Vector eA = entrance_measure(chain.P, chain.mu, part);
  const Vector xAc = exit_measure(chain.P, chain.mu, part);
  out.push_back({"entrance_kernel_stochastic", inf_norm(Ke.dagger), 1e-12});
  // Only rows of A^c that can step into A carry the exit chain.
  const Vector toA = submatrix(chain.P, part.Ac, part.A).rowwise().sum();
  double exit_defect = 0.0;
  for (Eigen::Index x = 0; x < toA.size(); ++x)
    if (toA(x) > 0.0) exit_defect = std::max(exit_defect, std::abs(Kx.dagger(x)));
  out.push_back({"exit_kernel_stochastic", exit_defect, 1e-12});
  out.push_back({"entrance_invariance", verify_invariance(eA, Ke.K), kIdentityTol});
  out.push_back({"exit_invariance", verify_invariance(xAc, Kx.K), kIdentityTol});
  out.push_back({"entrance_exit_mass", std::abs(eA.sum() - xAc.sum()), kIdentityTol});
  const auto kac = kac_reconstruct(chain, part);
  out.push_back({"kac_reconstruction", inf_norm(Vector(kac.reconstruction - chain.mu)), kIdentityTol});
  for (auto& c : kac_split_check(chain, part)) out.push_back(std::move(c));
  for (auto& c : duality_check(chain, part)) out.push_back(std::move(c));
  for (auto& c : reverse_inducing_check(chain, part)) out.push_back(std::move(c));
  return out;
}

Matrix random_irreducible_chain(int n, RngStream& rng, double threshold) {
  if (n < 2) throw ChainError("random chain needs at least two states");
  for (;;) {
    Matrix P(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) P(i, j) = -std::log(rng.uniform_open());
      P.row(i) /= P.row(i).sum();
      for (int j = 0; j < n; ++j)
        if (P(i, j) < threshold) P(i, j) = 0.0;
      P.row(i) /= P.row(i).sum();
    }
    if (is_irreducible(P)) return P;
  }
}

Bipartition random_bipartition(int n, RngStream& rng) {
  if (n < 2) throw ChainError("bipartition needs at least two states");
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(idx[i], idx[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
  std::vector<int> A(idx.begin(), idx.begin() + k);
  std::sort(A.begin(), A.end());
  return Bipartition::from_A(std::move(A), n);
}

Matrix ChainSpec::matrix() const {
  const Eigen::Index n = static_cast<Eigen::Index>(P.size());
  Matrix M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = to_double(P[i][j]);
  return M;
}

std::optional<Vector> ChainSpec::measure() const {
  if (!mu) return std::nullopt;
  Vector v(static_cast<Eigen::Index>(mu->size()));
  for (std::size_t i = 0; i < mu->size(); ++i) v(static_cast<Eigen::Index>(i)) = to_double((*mu)[i]);
  return v;
}

ChainSpec parse_chain_text(std::string_view text) {
  std::vector<std::pair<int, std::vector<std::string>>> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      std::istringstream ls(line);
      std::vector<std::string> toks;
      for (std::string t; ls >> t;) toks.push_back(t);
      if (!toks.empty()) lines.emplace_back(lineno, std::move(toks));
    }
  }
  auto fail = [](int lineno, const std::string& msg) -> ChainError {
    return ChainError("line " + std::to_string(lineno) + ": " + msg);
  };
  auto num = [&](int lineno, const std::string& s) {
    try {
      return parse_rational(s);
    } catch (const std::invalid_argument& e) {
      throw fail(lineno, e.what());
    }
  };

  ChainSpec spec;
  std::optional<int> n;
  bool have_A = false;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto& [lineno, toks] = lines[k];
    const std::string& key = toks[0];
    if (key == "n") {
      if (toks.size() != 2) throw fail(lineno, "expected 'n <count>'");
      const Rational v = num(lineno, toks[1]);
      if (boost::multiprecision::denominator(v) != 1 || v < 1) throw fail(lineno, "n must be a positive integer");
      n = boost::multiprecision::numerator(v).convert_to<int>();
    } else if (key == "P") {
      if (!n) throw fail(lineno, "'P' before 'n'");
      for (int i = 0; i < *n; ++i) {
        if (++k >= lines.size()) throw fail(lineno, "missing rows of P");
        const auto& [rl, row] = lines[k];
        if (static_cast<int>(row.size()) != *n)
          throw fail(rl, "row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                             " entries, expected " + std::to_string(*n));
        std::vector<Rational> r;
        Rational sum = 0;
        for (const auto& t : row) {
          r.push_back(num(rl, t));
          if (r.back() < 0) throw fail(rl, "negative transition probability");
          sum += r.back();
        }
        if (boost::multiprecision::abs(sum - 1) > Rational(1, 1000000000000LL))
          throw fail(rl, "row " + std::to_string(i) + " sums to " + to_string(sum));
        spec.P.push_back(std::move(r));
      }
    } else if (key == "mu") {
      std::vector<Rational> m;
      for (std::size_t t = 1; t < toks.size(); ++t) m.push_back(num(lineno, toks[t]));
      spec.mu = std::move(m);
    } else if (key == "A") {
      for (std::size_t t = 1; t < toks.size(); ++t) {
        const Rational v = num(lineno, toks[t]);
        if (boost::multiprecision::denominator(v) != 1) throw fail(lineno, "state index must be an integer");
        spec.A.push_back(boost::multiprecision::numerator(v).convert_to<int>());
      }
      have_A = true;
    } else {
      throw fail(lineno, "unknown key '" + key + "'");
    }
  }
  if (!n) throw ChainError("missing 'n'");
  if (static_cast<int>(spec.P.size()) != *n) throw ChainError("missing 'P'");
  if (spec.mu && static_cast<int>(spec.mu->size()) != *n) throw ChainError("mu has the wrong length");
  if (!have_A) throw ChainError("missing 'A'");
  Bipartition::from_A(spec.A, *n);
  return spec;
}

}  // namespace entrex
