#include "h2dfo/interpolation_set.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "h2dfo/errors.hpp"

namespace h2dfo {

bool same_point(const Point& a, const Point& b) {
  return (a - b).norm() <= kDuplicateTolerance * std::max(1.0, a.norm());
}

InterpolationSet::InterpolationSet(std::vector<Point> points, std::vector<double> values, Point base)
    : points_(std::move(points)), values_(std::move(values)), base_(std::move(base)) {
  const std::size_t n = dim();
  if (n < 1) throw ContractViolation("InterpolationSet: dimension must be >= 1");
  if (points_.empty()) throw ContractViolation("InterpolationSet: needs at least one point");
  if (points_.size() != values_.size()) {
    throw ContractViolation("InterpolationSet: points and values differ in length");
  }
  if (points_.size() > max_points(n)) {
    throw ContractViolation("InterpolationSet: more than (n+1)(n+2)/2 points");
  }
  if (!base_.allFinite()) throw ContractViolation("InterpolationSet: base must be finite");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (static_cast<std::size_t>(points_[i].size()) != n) {
      throw ContractViolation("InterpolationSet: point " + std::to_string(i) + " has wrong dimension");
    }
    if (!points_[i].allFinite()) throw ContractViolation("InterpolationSet: non-finite point");
    for (std::size_t j = 0; j < i; ++j) {
      if (same_point(points_[i], points_[j])) {
        throw DuplicatePointError("InterpolationSet: points " + std::to_string(j) + " and " +
                                  std::to_string(i) + " coincide");
      }
    }
  }
  recompute_best();
}

void InterpolationSet::recompute_best() {
  best_ = 0;
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] < values_[best_]) best_ = i;
  }
}

std::size_t InterpolationSet::find(const Point& x, std::size_t skip) const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i != skip && same_point(points_[i], x)) return i;
  }
  return points_.size();
}

InterpolationSet InterpolationSet::with_base(Point new_base) const {
  if (static_cast<std::size_t>(new_base.size()) != dim()) {
    throw ContractViolation("InterpolationSet::with_base: dimension mismatch");
  }
  InterpolationSet out = *this;
  out.base_ = std::move(new_base);
  return out;
}

std::size_t select_drop_index(const InterpolationSet& set) {
  const std::size_t best = set.best_index();
  if (set.size() == 1) return 0;
  std::size_t t = best == 0 ? 1 : 0;
  double far = -1.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i == best) continue;
    const double d = (set.point(i) - set.best_point()).norm();
    if (d > far) {
      far = d;
      t = i;
    }
  }
  return t;
}

InterpolationSet replace_point(const InterpolationSet& set, std::size_t t, const Point& x_new,
                               double f_new) {
  if (t >= set.size()) throw ContractViolation("replace_point: index out of range");
  if (static_cast<std::size_t>(x_new.size()) != set.dim()) {
    throw ContractViolation("replace_point: dimension mismatch");
  }
  if (!x_new.allFinite()) throw ContractViolation("replace_point: non-finite point");
  if (set.find(x_new, t) != set.size()) {
    throw DuplicatePointError("replace_point: new point coincides with a retained point");
  }
  InterpolationSet out = set;
  out.points_[t] = x_new;
  out.values_[t] = f_new;
  out.recompute_best();
  return out;
}

}  // namespace h2dfo
