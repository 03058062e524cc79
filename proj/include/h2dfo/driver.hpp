#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "h2dfo/kkt.hpp"
#include "h2dfo/quadratic.hpp"

namespace h2dfo {

enum class ModelKind { kH2, kFrobenius };

[[nodiscard]] std::string to_string(ModelKind kind);
/// Accepts "h2" and "frobenius"; throws std::invalid_argument otherwise.
[[nodiscard]] ModelKind parse_model_kind(const std::string& text);

struct TrustRegionConfig {
  double delta0 = 1.0;
  double gamma = 2.0;
  double eta_hat1 = 0.25;
  double eta_hat2 = 0.75;
  double mu = 0.1;
  double eps_c = 1e-8;
  /// Number of interpolation points; 0 means 2n+1.
  std::size_t m = 0;
  SobolevWeights weights;
  /// Evaluation budget; 0 means 200(n+1).
  std::size_t max_nf = 0;
  ModelKind model_kind = ModelKind::kH2;
  std::uint64_t seed = 0;
  /// Explicit initial interpolation points (overrides the default pattern).
  std::vector<Point> initial_points;
  BetaForm beta_form = BetaForm::kAssembled;
  /// One line per iteration when set.
  std::ostream* log = nullptr;

  [[nodiscard]] std::size_t points_for(std::size_t n) const { return m == 0 ? 2 * n + 1 : m; }
  [[nodiscard]] std::size_t budget_for(std::size_t n) const { return max_nf == 0 ? 200 * (n + 1) : max_nf; }
  /// Throws ContractViolation on an invalid configuration for dimension n.
  void validate(std::size_t n) const;
};

enum class TerminationReason { kRadius, kGradientRadius, kBudget, kGeometryFailure };

[[nodiscard]] std::string to_string(TerminationReason reason);

struct SolveResult {
  Point best_point;
  double best_value = 0.0;
  std::size_t nf = 0;
  /// Best value seen after each evaluation.
  std::vector<double> history;
  TerminationReason termination_reason = TerminationReason::kBudget;
  std::size_t iterations = 0;
  std::size_t refactorizations = 0;
  std::size_t criticality_cap_hits = 0;
};

/// Predicted reductions at or below this fraction of max(1, |q_old|) are
/// treated as zero.
inline constexpr double kPredictedReductionGuard = 1e-14;

/// (f_old - f_new) / (q_old - q_new), or -infinity when the predicted
/// reduction is negligible.
[[nodiscard]] double acceptance_ratio(double f_old, double f_new, double q_old, double q_new);

[[nodiscard]] double update_radius(double delta, double rho, const TrustRegionConfig& cfg);

/// update_radius, but never beyond max(delta / gamma, gamma ||d||) after a
/// success or max(delta / gamma, ||d||) after an acceptable step.
[[nodiscard]] double step_radius(double delta, double rho, double step_norm, const TrustRegionConfig& cfg);

/// Default initial interpolation points around x_int for m points.
[[nodiscard]] std::vector<Point> initial_points(const Point& x_int, std::size_t m);

[[nodiscard]] SolveResult run_solver(const Objective& f, const Point& x_int, const TrustRegionConfig& cfg);

}  // namespace h2dfo
