#include "doctest.h"

#include "entrex/finite_chain.hpp"

using namespace entrex;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) M(i, j++) = v;
    ++i;
  }
  return M;
}

const Matrix kFlip = mat({{0, 1}, {1, 0}});
const Matrix kCycle = mat({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});

Matrix birth_death5() {
  Matrix P = Matrix::Zero(5, 5);
  const double up[] = {0.6, 0.3, 0.5, 0.2};
  for (int i = 0; i < 4; ++i) {
    P(i, i + 1) = up[i];
    P(i + 1, i) = 0.4 + 0.1 * i;
  }
  for (int i = 0; i < 5; ++i) P(i, i) = 1.0 - P.row(i).sum();
  return P;
}

bool all_pass(const std::vector<IdentityCheck>& v) {
  for (const auto& c : v)
    if (!c.pass()) return false;
  return !v.empty();
}

}  // namespace

TEST_CASE("stationary vectors") {
  const Vector f = stationary_vector(kFlip);
  CHECK(f(0) == doctest::Approx(0.5).epsilon(1e-14));
  const Vector c = stationary_vector(kCycle);
  for (int i = 0; i < 3; ++i) CHECK(c(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  const Vector t = stationary_vector(mat({{0.9, 0.1}, {0.2, 0.8}}));
  CHECK(t(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(t(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("reducible and malformed chains are rejected") {
  const Matrix R = mat({{1, 0}, {0, 1}});
  CHECK_FALSE(is_irreducible(R));
  CHECK(communicating_classes(R).size() == 2);
  CHECK_THROWS_AS(stationary_vector(R), ReducibleChain);
  CHECK_THROWS_AS(require_stochastic(mat({{0.5, 0.4}, {0, 1}})), ChainError);
  CHECK_THROWS_AS(require_stochastic(mat({{1.5, -0.5}, {0, 1}})), ChainError);
  CHECK_THROWS_AS(Bipartition::from_A({0, 1}, 2), ChainError);
  CHECK_THROWS_AS(Bipartition::from_A({3}, 2), ChainError);
}

TEST_CASE("dual kernels") {
  const Matrix d = dual_kernel(kCycle, stationary_vector(kCycle));
  CHECK((d - kCycle.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  const Matrix B = birth_death5();
  CHECK((dual_kernel(B, stationary_vector(B)) - B).cwiseAbs().maxCoeff() < 1e-12);
  const Matrix T = mat({{0.9, 0.1}, {0.2, 0.8}});
  const Matrix dt = dual_kernel(T, stationary_vector(T));
  CHECK(dt(1, 0) == doctest::Approx(0.2).epsilon(1e-13));
  CHECK((dt - T).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("3-cycle kernels and measures by hand") {
  const auto part = Bipartition::from_A({1, 2}, 3);
  const auto chain = FiniteChain::make(kCycle);
  const auto ke = entrance_kernel_exact(kCycle, part);
  CHECK((ke.K - mat({{1, 0}, {1, 0}})).cwiseAbs().maxCoeff() == 0.0);
  CHECK(ke.dagger.cwiseAbs().maxCoeff() == 0.0);
  const auto kx = exit_kernel_exact(kCycle, part);
  CHECK(kx.K(0, 0) == 1.0);
  const Vector ent = entrance_measure(kCycle, chain.mu, part);
  CHECK(ent(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(ent(1) == 0.0);
  const Vector ex = exit_measure(kCycle, chain.mu, part);
  CHECK(ex(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(verify_invariance(ent, ke.K) == 0.0);
  const auto kac = kac_reconstruct(chain, part);
  for (int i = 0; i < 3; ++i) CHECK(kac.reconstruction(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(all_pass(kac_split_check(chain, part)));
  const auto ri = reverse_inducing(chain, part);
  CHECK(ri.simple_unit_eigenvalue);
  CHECK(ri.nu(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(ri.nu(1)) < 1e-12);
  CHECK(ri.proportionality_residual < 1e-10);
}

TEST_CASE("flip chain") {
  const auto part = Bipartition::from_A({1}, 2);
  const auto chain = FiniteChain::make(kFlip);
  CHECK(entrance_kernel_exact(kFlip, part).K(0, 0) == 1.0);
  CHECK(exit_kernel_exact(kFlip, part).K(0, 0) == 1.0);
  CHECK(entrance_measure(kFlip, chain.mu, part)(0) == doctest::Approx(0.5));
  CHECK(verify_invariance(exit_measure(kFlip, chain.mu, part), exit_kernel_exact(kFlip, part).K) == 0.0);
  const auto kac = kac_reconstruct(chain, part);
  CHECK(kac.reconstruction(0) == doctest::Approx(0.5));
  CHECK(kac.reconstruction(1) == doctest::Approx(0.5));
  for (const auto& c : duality_check(chain, part)) CHECK(c.residual < 1e-15);
  for (const auto& c : kac_split_check(chain, part)) CHECK(c.residual < 1e-15);
}

TEST_CASE("exit kernel sends rows without a step into A to dagger") {
  const auto part = Bipartition::from_A({2}, 3);
  const auto kx = exit_kernel_exact(kCycle, part);
  CHECK(kx.dagger(0) == 1.0);
  CHECK(kx.K.row(0).sum() == 0.0);
  CHECK(kx.K(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("birth-death duality") {
  const auto chain = FiniteChain::make(birth_death5());
  const auto part = Bipartition::from_A({0, 1, 2}, 5);
  for (const auto& c : duality_check(chain, part)) CHECK(c.residual <= 1e-10);
  CHECK(all_pass(all_identity_checks(chain, part)));
}

TEST_CASE("random chains satisfy every identity and the structural properties") {
  RngStream rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + rep % 7;
    const Matrix P = random_irreducible_chain(n, rng);
    CHECK(is_irreducible(P));
    const auto chain = FiniteChain::make(P);
    const auto part = random_bipartition(n, rng);
    for (const auto& c : all_identity_checks(chain, part)) {
      INFO(c.name);
      CHECK(c.residual <= c.tolerance);
    }
    const auto ke = entrance_kernel_exact(P, part);
    for (Eigen::Index i = 0; i < ke.K.rows(); ++i)
      CHECK(ke.K.row(i).sum() + ke.dagger(i) == doctest::Approx(1.0).epsilon(1e-12));
    // scale equivariance
    const Vector a = entrance_measure(P, chain.mu, part);
    const Vector b = entrance_measure(P, 3.5 * chain.mu, part);
    CHECK((b - 3.5 * a).cwiseAbs().maxCoeff() < 1e-12);
    // exit measure of A^c equals the dual entrance measure of A
    const Matrix D = dual_kernel(chain);
    const auto swapped = Bipartition::from_A(part.Ac, n);
    CHECK((exit_measure(P, chain.mu, swapped) - entrance_measure(D, chain.mu, part)).cwiseAbs().maxCoeff() < 1e-12);
    // the dual of the dual is the chain
    CHECK((dual_kernel(D, chain.mu) - P).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("chain text") {
  const auto spec = parse_chain_text(
      "# ring\n"
      "n 3\n"
      "P\n"
      "0 1/2 1/2\n"
      "1/2 0 1/2\n"
      "0.5 0.5 0\n"
      "mu 1/3 1/3 1/3\n"
      "A 0 2\n");
  CHECK(spec.A == std::vector<int>{0, 2});
  CHECK(spec.matrix()(2, 0) == 0.5);
  REQUIRE(spec.measure().has_value());
  CHECK((*spec.measure())(1) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_WITH_AS(parse_chain_text("n 2\nP\n0 1\n1/2 1/3\nA 0\n"), doctest::Contains("line 4"), ChainError);
  CHECK_THROWS_AS(parse_chain_text("n 2\nP\n0 1\n1 0\n"), ChainError);
  CHECK_THROWS_AS(parse_chain_text("P\n0 1\n"), ChainError);
  CHECK_THROWS_AS(parse_chain_text("n 2\nQ 1\n"), ChainError);
  CHECK_THROWS_AS(parse_chain_text("n 2\nP\n0 x\n1 0\nA 0\n"), ChainError);
}
