#pragma once

#include <iosfwd>
#include <cstddef>
#include <optional>
#include <vector>

#include "h2dfo/driver.hpp"
#include "h2dfo/quadratic.hpp"

namespace h2dfo {

/// (0,0), (sqrt3/2, 1/2), (-sqrt3/2, 1/2), (0,-1): four points on the unit circle.
[[nodiscard]] std::vector<Point> unit_circle_points();

/// Initial model through the unit-circle points with Rosenbrock values,
/// anchored at the origin with the norm ball of radius r.
[[nodiscard]] QuadraticModel table2_model(ModelKind kind, double r = 10.0,
                                          const SobolevWeights& weights = {});

/// Stationary point -G^{-1} g of a model with positive definite Hessian.
[[nodiscard]] std::optional<Point> model_minimizer(const QuadraticModel& model);

struct Table2Reference {
  Vector g;
  Matrix hess;
  Point minimizer;
  double f_min = 0.0;
};

[[nodiscard]] Table2Reference table2_reference(ModelKind kind);

/// Largest absolute deviation over g, G, minimizer and f(minimizer).
[[nodiscard]] double table2_deviation(const QuadraticModel& model, const Table2Reference& ref);

/// Radius in {1, ..., 10} whose H2 model is closest to the reference.
[[nodiscard]] double best_table2_radius(const SobolevWeights& weights = {});

/// Initial points of the 2D Rosenbrock runs with m = 1..6 points.
[[nodiscard]] std::vector<Point> rosenbrock_start_points(std::size_t m);

/// Published evaluation counts of the H2 solver for m = 1..6.
[[nodiscard]] std::size_t rosenbrock_reference_nf(std::size_t m);

/// Solver settings of the 2D Rosenbrock runs: start at the origin with the
/// points of rosenbrock_start_points(m).
[[nodiscard]] TrustRegionConfig rosenbrock_config(ModelKind kind, std::size_t m);

/// 1-based index of the first evaluation with best value <= target, or 0.
[[nodiscard]] std::size_t evaluations_to_reach(const SolveResult& result, double target);

/// Prints reference and computed coefficients side by side.
void print_table2(std::ostream& out, double r = 10.0);

}  // namespace h2dfo
