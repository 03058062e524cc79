#pragma once

#include <cstddef>
#include <vector>

#include "h2dfo/quadratic.hpp"

namespace h2dfo {

/// Relative distance below which two points count as the same point:
/// ||a - b|| <= kDuplicateTolerance * max(1, ||a||).
inline constexpr double kDuplicateTolerance = 1e-12;

[[nodiscard]] bool same_point(const Point& a, const Point& b);

/// m interpolation points with their objective values, the index of the
/// lowest value (ties -> lowest index) and the base point the KKT system
/// is expressed about.
class InterpolationSet {
 public:
  InterpolationSet(std::vector<Point> points, std::vector<double> values, Point base);

  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(base_.size()); }
  [[nodiscard]] const std::vector<Point>& points() const { return points_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] const Point& point(std::size_t i) const { return points_.at(i); }
  [[nodiscard]] double value(std::size_t i) const { return values_.at(i); }
  [[nodiscard]] std::size_t best_index() const { return best_; }
  [[nodiscard]] const Point& best_point() const { return points_[best_]; }
  [[nodiscard]] double best_value() const { return values_[best_]; }
  [[nodiscard]] const Point& base() const { return base_; }

  /// Displacement x_i - x0.
  [[nodiscard]] Vector offset(std::size_t i) const { return points_.at(i) - base_; }

  /// Index of an existing point equal to x (excluding `skip`), or size() if none.
  [[nodiscard]] std::size_t find(const Point& x, std::size_t skip) const;

  [[nodiscard]] InterpolationSet with_base(Point new_base) const;

  /// Maximum number of points for which a quadratic is still under-determined or exact.
  static std::size_t max_points(std::size_t n) { return (n + 1) * (n + 2) / 2; }

 private:
  friend InterpolationSet replace_point(const InterpolationSet&, std::size_t, const Point&, double);
  void recompute_best();

  std::vector<Point> points_;
  std::vector<double> values_;
  Point base_;
  std::size_t best_ = 0;
};

/// Index of the point farthest from the best point (ties -> lowest index).
/// Never the best index when m > 1.
[[nodiscard]] std::size_t select_drop_index(const InterpolationSet& set);

/// Copy of `set` with point t replaced by (x_new, f_new). Throws
/// DuplicatePointError if x_new coincides with a retained point.
[[nodiscard]] InterpolationSet replace_point(const InterpolationSet& set, std::size_t t,
                                             const Point& x_new, double f_new);

}  // namespace h2dfo
