#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entrex/increment_law.hpp"

namespace entrex {

/// Closed axis-aligned box [lo, hi].
struct Box {
  Point lo;
  Point hi;
};

/// Target set A given by a membership predicate on the state space.
class TargetSet {
 public:
  using Predicate = std::function<bool(std::span<const double>)>;

  TargetSet(std::string label, Predicate pred, bool interior_nonempty = true);

  /// [0, inf)^d.
  static TargetSet nonnegative_orthant(int d);
  /// (-inf, 0)^d.
  static TargetSet negative_orthant(int d);
  /// [c, inf) in d = 1.
  static TargetSet at_or_above(double c);
  /// (-inf, c) in d = 1.
  static TargetSet below(double c);
  static TargetSet box_union(std::vector<Box> boxes);
  /// Finite set of points, matched to within `tol` per coordinate.
  static TargetSet points(std::vector<Point> pts, double tol = 1e-9);

  TargetSet complement() const;

  bool contains(std::span<const double> x) const { return (*pred_)(x); }
  bool contains(double x) const { return (*pred_)(std::span<const double>(&x, 1)); }
  const std::string& label() const noexcept { return label_; }
  bool interior_nonempty() const noexcept { return interior_nonempty_; }

  /// Set when A = [c, inf) in d = 1, enabling threshold scans.
  std::optional<double> lower_threshold() const noexcept { return ge_; }
  /// Set when A = (-inf, c) in d = 1.
  std::optional<double> upper_threshold() const noexcept { return lt_; }
  /// True for [0, inf)^d.
  bool is_nonnegative_orthant() const noexcept { return orthant_; }

 private:
  std::string label_;
  std::shared_ptr<const Predicate> pred_;
  bool interior_nonempty_ = true;
  std::optional<double> ge_;
  std::optional<double> lt_;
  bool orthant_ = false;
};

}  // namespace entrex
