#include "entrex/target_set.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace entrex {

TargetSet::TargetSet(std::string label, Predicate pred, bool interior_nonempty)
    : label_(std::move(label)),
      pred_(std::make_shared<const Predicate>(std::move(pred))),
      interior_nonempty_(interior_nonempty) {
  if (!*pred_) throw std::invalid_argument("TargetSet: empty predicate");
}

TargetSet TargetSet::nonnegative_orthant(int d) {
  if (d < 1) throw std::invalid_argument("orthant dimension must be positive");
  TargetSet s(d == 1 ? "[0,inf)" : "[0,inf)^" + std::to_string(d),
              [](std::span<const double> x) {
                for (double c : x)
                  if (!(c >= 0.0)) return false;
                return true;
              });
  if (d == 1) s.ge_ = 0.0;
  s.orthant_ = true;
  return s;
}

TargetSet TargetSet::negative_orthant(int d) {
  if (d < 1) throw std::invalid_argument("orthant dimension must be positive");
  TargetSet s(d == 1 ? "(-inf,0)" : "(-inf,0)^" + std::to_string(d),
              [](std::span<const double> x) {
                for (double c : x)
                  if (!(c < 0.0)) return false;
                return true;
              });
  if (d == 1) s.lt_ = 0.0;
  return s;
}

TargetSet TargetSet::at_or_above(double c) {
  std::ostringstream os;
  os << '[' << c << ",inf)";
  TargetSet s(os.str(), [c](std::span<const double> x) { return x[0] >= c; });
  s.ge_ = c;
  return s;
}

TargetSet TargetSet::below(double c) {
  std::ostringstream os;
  os << "(-inf," << c << ')';
  TargetSet s(os.str(), [c](std::span<const double> x) { return x[0] < c; });
  s.lt_ = c;
  return s;
}

TargetSet TargetSet::box_union(std::vector<Box> boxes) {
  for (const auto& b : boxes)
    if (b.lo.size() != b.hi.size() || b.lo.empty())
      throw std::invalid_argument("box corners must have equal positive dimension");
  bool interior = false;
  std::ostringstream os;
  os << "boxes[" << boxes.size() << ']';
  for (const auto& b : boxes) {
    bool open = true;
    for (std::size_t i = 0; i < b.lo.size(); ++i) open = open && b.lo[i] < b.hi[i];
    interior = interior || open;
  }
  return TargetSet(
      os.str(),
      [boxes = std::move(boxes)](std::span<const double> x) {
        for (const auto& b : boxes) {
          if (b.lo.size() != x.size()) continue;
          bool in = true;
          for (std::size_t i = 0; i < x.size() && in; ++i) in = x[i] >= b.lo[i] && x[i] <= b.hi[i];
          if (in) return true;
        }
        return false;
      },
      interior);
}

TargetSet TargetSet::points(std::vector<Point> pts, double tol) {
  std::ostringstream os;
  os << "points[" << pts.size() << ']';
  return TargetSet(
      os.str(),
      [pts = std::move(pts), tol](std::span<const double> x) {
        for (const auto& p : pts) {
          if (p.size() != x.size()) continue;
          bool eq = true;
          for (std::size_t i = 0; i < x.size() && eq; ++i) eq = std::abs(x[i] - p[i]) <= tol;
          if (eq) return true;
        }
        return false;
      },
      false);
}

TargetSet TargetSet::complement() const {
  TargetSet c("complement(" + label_ + ")",
              [p = pred_](std::span<const double> x) { return !(*p)(x); });
  if (ge_) {
    c = below(*ge_);
  } else if (lt_) {
    c = at_or_above(*lt_);
  }
  return c;
}

}  // namespace entrex
