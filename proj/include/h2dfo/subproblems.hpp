#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "h2dfo/interpolation_set.hpp"
#include "h2dfo/kkt.hpp"
#include "h2dfo/quadratic.hpp"

namespace h2dfo {

struct TrialStep {
  Vector d;
  double predicted_reduction = 0.0;
  bool on_boundary = false;
};

struct TrspOptions {
  /// CG stops once ||residual|| <= relative_tolerance * ||g||.
  double relative_tolerance = 1e-10;
  /// Extra CG iterations allowed beyond n.
  std::size_t extra_iterations = 2;
  /// Angular refinement sweeps along the boundary after truncation.
  std::size_t boundary_sweeps = 8;
};

/// Approximately minimizes Q(center + d) subject to ||d|| <= delta:
/// Steihaug-Toint truncated CG from d = 0, followed by a few angular
/// sweeps on the sphere when CG stops on the boundary.
[[nodiscard]] TrialStep solve_trsp(const QuadraticModel& model, const Point& center, double delta,
                                   const TrspOptions& options = {});

/// sigma = alpha beta + tau^2 for replacing x_t by center + d.
[[nodiscard]] double sigma_of_step(const KktFactor& factor, const InterpolationSet& set, std::size_t t,
                                   const Point& center, const Vector& d);
/// Same with center = the set's best point.
[[nodiscard]] double sigma_of_step(const KktFactor& factor, const InterpolationSet& set, std::size_t t,
                                   const Vector& d);

struct GeometryStep {
  Vector d;
  double sigma = 0.0;
};

/// Search directions of the geometry step; see improve_geometry.
[[nodiscard]] std::vector<Vector> geometry_candidates(const KktFactor& factor, const InterpolationSet& set,
                                                      std::size_t t, const Point& center,
                                                      std::mt19937_64& rng);

/// Approximate maximizer of |sigma(d)| over ||d|| <= delta.
///
/// Scores the candidate steps {+-delta e_i}, +-delta along x_t - center,
/// +-delta along the gradient of the t-th Lagrange function and 2n random
/// directions, then maximizes |sigma| exactly along the winning line
/// (sigma restricted to a line is a quartic). Throws GeometryFailure when
/// every candidate is degenerate.
[[nodiscard]] GeometryStep improve_geometry(const KktFactor& factor, const InterpolationSet& set,
                                            std::size_t t, const Point& center, double delta,
                                            std::mt19937_64& rng);
[[nodiscard]] GeometryStep improve_geometry(const KktFactor& factor, const InterpolationSet& set,
                                            std::size_t t, double delta, std::mt19937_64& rng);

/// Real roots of c0 + c1 x + ... + ck x^k (coefficients low to high).
[[nodiscard]] std::vector<double> real_polynomial_roots(std::vector<double> coeffs);

}  // namespace h2dfo
