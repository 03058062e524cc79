#pragma once

#include <cstddef>

#include "h2dfo/interpolation_set.hpp"
#include "h2dfo/kkt.hpp"
#include "h2dfo/quadratic.hpp"

namespace h2dfo {

/// Solution of one KKT solve: multipliers, the coefficients (c, g) and the
/// Hessian recovered from the stationarity condition.
struct UpdateSolution {
  Vector lambda;
  double c = 0.0;
  Vector g;
  double trace_t = 0.0;
  Matrix hess;

  /// The difference model D expressed about `base`.
  [[nodiscard]] QuadraticModel to_model(const Point& base) const;
};

/// Solves W (lambda, c, g) = (rhs, 0, 0) with the maintained inverse and
/// recovers Tr(G) and G. `rhs` holds one value per interpolation point.
[[nodiscard]] UpdateSolution solve_rhs(const KktFactor& factor, const InterpolationSet& set,
                                       const Vector& rhs);

/// Minimum-norm change D with D(x_new) = residual and D(x_i) = 0 at the other
/// points. `factor` and `set` must already contain x_new at slot t. Throws
/// StaleFactorError if D misses an interpolation condition by more than
/// 1e-8 max(1, |residual|).
[[nodiscard]] UpdateSolution solve_update(const KktFactor& factor, const InterpolationSet& set,
                                          std::size_t t, const Point& x_new, double residual);

/// Q0 interpolating all values of `set`, minimal in the weighted norm.
[[nodiscard]] QuadraticModel build_initial_model(const KktFactor& factor, const InterpolationSet& set);
/// Same, assembling the factor first. Throws NotPoisedError on a singular system.
[[nodiscard]] QuadraticModel build_initial_model(const InterpolationSet& set, const EtaCoefficients& eta);

/// Max over the set of |model(x_i) - target_i| / max(1, |target_i|).
[[nodiscard]] double interpolation_error(const QuadraticModel& model, const InterpolationSet& set,
                                         const Vector& targets);

}  // namespace h2dfo
