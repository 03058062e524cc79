#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "h2dfo/driver.hpp"
#include "h2dfo/quadratic.hpp"

namespace h2dfo {

struct Example1Options {
  std::size_t iterations = 3;
  /// Fixed trust-region radius.
  double delta = 1.0;
  /// Grid (p h, q h) for |p|, |q| <= grid_half.
  int grid_half = 100;
  double grid_step = 0.01;
  SobolevWeights weights;
};

/// Errors of Q_k after iteration k for one model kind. Iteration 0 is the
/// zero model before any update.
struct Example1Row {
  ModelKind kind = ModelKind::kH2;
  std::size_t iteration = 0;
  Point x_new;
  Point dropped;
  /// Ball radius used for the update.
  double r = 0.0;
  QuadraticModel model;
  /// The update D_k = Q_k - Q_{k-1}.
  QuadraticModel change;
  double itr_max = 0.0;
  double itr_mean = 0.0;
  double grid_max = 0.0;
  double grid_mean = 0.0;
};

/// Three points (0,0), (1,0), (0,1) with Q_0 = 0. At every iteration the
/// residual f - Q_{k-1} is 1 at the new point and 0 elsewhere, so the error
/// of Q_k is |[y = x_new] - D_k(y)|. x_new minimizes Q_{k-1} over the ball of
/// radius delta around the best point (zero model: the +e1 direction) and
/// replaces the point farthest from the best point among those whose
/// removal keeps the set affinely independent.
[[nodiscard]] std::vector<Example1Row> example1_experiment(const Example1Options& options = {});

void print_example1(std::ostream& out, const std::vector<Example1Row>& rows);

}  // namespace h2dfo
