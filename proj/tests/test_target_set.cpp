#include "doctest.h"

#include "entrex/target_set.hpp"

using namespace entrex;

TEST_CASE("orthants split the plane with zero on the nonnegative side") {
  const auto A = TargetSet::nonnegative_orthant(2);
  const auto B = TargetSet::negative_orthant(2);
  CHECK(A.is_nonnegative_orthant());
  CHECK(A.contains(Point{0.0, 0.0}));
  CHECK(A.contains(Point{3.0, 0.0}));
  CHECK_FALSE(A.contains(Point{-1.0, 2.0}));
  CHECK(B.contains(Point{-1.0, -1.0}));
  CHECK_FALSE(B.contains(Point{-1.0, 0.0}));
}

TEST_CASE("half-lines expose their threshold") {
  const auto A = TargetSet::at_or_above(0.0);
  CHECK(A.lower_threshold() == 0.0);
  CHECK(A.contains(0.0));
  CHECK_FALSE(A.contains(-1e-300));
  const auto B = TargetSet::below(2.0);
  CHECK(B.upper_threshold() == 2.0);
  CHECK(B.contains(1.999));
  CHECK_FALSE(B.contains(2.0));
}

TEST_CASE("complement flips membership and threshold kind") {
  const auto A = TargetSet::at_or_above(1.5);
  const auto C = A.complement();
  for (double x : {-2.0, 1.0, 1.5, 4.0}) CHECK(C.contains(x) != A.contains(x));
  CHECK(C.upper_threshold() == 1.5);
  CHECK_FALSE(C.lower_threshold().has_value());
  CHECK(C.complement().lower_threshold() == 1.5);
}

TEST_CASE("box unions and point sets") {
  const auto A = TargetSet::box_union({{{0.0, 0.0}, {1.0, 1.0}}, {{3.0, -1.0}, {4.0, 0.0}}});
  CHECK(A.contains(Point{1.0, 1.0}));
  CHECK(A.contains(Point{3.5, -0.5}));
  CHECK_FALSE(A.contains(Point{2.0, 0.5}));
  const auto P = TargetSet::points({{0.0}, {2.0}});
  CHECK(P.contains(2.0));
  CHECK(P.contains(2.0 + 1e-12));
  CHECK_FALSE(P.contains(1.0));
  CHECK_FALSE(P.interior_nonempty());
}
