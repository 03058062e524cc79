#pragma once

#include <cstddef>

#include "h2dfo/interpolation_set.hpp"
#include "h2dfo/quadratic.hpp"

namespace h2dfo {

/// Coefficients of the reduced objective
///   eta1 ||G||_F^2 + eta2 ||g||^2 + eta3 Tr(G)^2 + eta4 Tr(G) c + eta5 c^2
/// obtained from the weighted Sobolev norm on a ball of radius r in R^n.
struct EtaCoefficients {
  double eta1 = 1.0;
  double eta2 = 0.0;
  double eta3 = 0.0;
  double eta4 = 0.0;
  double eta5 = 0.0;
  double r = 1.0;
  std::size_t n = 1;

  /// A(x_i, x_j) for offsets di = x_i - x0, dj = x_j - x0.
  [[nodiscard]] double a_entry(const Vector& di, const Vector& dj) const;
  /// J_i = 1 - eta4 / (4 n eta3 + 4 eta1) ||d||^2.
  [[nodiscard]] double j_entry(const Vector& d) const;
  /// Entry of W coupling c with itself.
  [[nodiscard]] double center_scalar() const;
  [[nodiscard]] bool frobenius_mode() const;
};

[[nodiscard]] EtaCoefficients eta_from_weights(const SobolevWeights& weights, double r, std::size_t n);

/// How beta's leading term is formed in the inverse update.
enum class BetaForm {
  /// A(x_new, x_new): the new diagonal entry of W (exact inverse update).
  kAssembled,
  /// ||x_new - x0||^4 / (8 eta1), without the eta3 correction.
  kLiteral,
};

/// The bordered KKT matrix W, its maintained inverse H and the data they were
/// built from. Unknowns are ordered (lambda_1..lambda_m, c, g_1..g_n).
struct KktFactor {
  Matrix w;
  Matrix h;
  EtaCoefficients eta;
  Point base;
  bool frobenius_mode = false;
  BetaForm beta_form = BetaForm::kAssembled;
  /// Symmetric equilibration used at the last factorization (W' = D W D).
  Vector scaling;
  /// scaled_residual() right after the last factorization.
  double build_residual = 0.0;

  [[nodiscard]] std::size_t m() const {
    return static_cast<std::size_t>(w.rows()) - eta.n - 1;
  }
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(w.rows()); }

  /// ||W H - I||_max.
  [[nodiscard]] double residual() const;
  /// max_ij |D_i (W H - I)_ij / D_j| using the stored equilibration.
  [[nodiscard]] double scaled_residual() const;
  /// ||W H - I||_max <= 1e-8 ||W||_max.
  [[nodiscard]] bool residual_ok() const;
};

/// Tolerance of the residual invariant on W H = I.
inline constexpr double kResidualTolerance = 1e-8;
/// Largest scaled residual a fresh factorization may have.
inline constexpr double kFactorTolerance = 1e-3;
/// Condition number above which a (equilibrated) KKT matrix counts as singular.
inline constexpr double kConditionLimit = 1e12;

/// Builds W for `set` (about set.base()) and inverts it with an equilibrated,
/// partially pivoted LU. Throws NotPoisedError if W is singular.
[[nodiscard]] KktFactor assemble_w(const InterpolationSet& set, const EtaCoefficients& eta,
                                   BetaForm beta_form = BetaForm::kAssembled);

/// Whether W is invertible, decided on the (m+1)x(m+1) Schur-reduced matrix
/// when eta2 > 0 and on W itself otherwise.
[[nodiscard]] bool invertibility_check(const InterpolationSet& set, const EtaCoefficients& eta);

/// Symmetric Ruiz equilibration: returns D such that every row of D M D has
/// max-abs entry close to one. Zero rows keep scale 1.
[[nodiscard]] Vector symmetric_equilibration(const Matrix& m);

/// Condition number (2-norm) of the equilibrated matrix; +inf when singular.
[[nodiscard]] double equilibrated_condition(const Matrix& m);

struct UpdateCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double tau = 0.0;
  double sigma = 0.0;
  Vector omega;
  /// H * omega, kept for the update.
  Vector h_omega;
  /// A(x_new, x_new), the diagonal entry of W after the replacement.
  double new_diagonal = 0.0;
};

/// The column that replaces column t of W when x_new enters the set.
[[nodiscard]] Vector omega_vector(const KktFactor& factor, const InterpolationSet& set,
                                  const Point& x_new);

[[nodiscard]] UpdateCoefficients update_coefficients(const KktFactor& factor, const Vector& omega,
                                                     std::size_t t, const Point& x_new);

/// sigma_min = 1e-12 * max(1, |alpha||beta|, tau^2).
[[nodiscard]] double sigma_threshold(const UpdateCoefficients& coeffs);
[[nodiscard]] bool is_degenerate(const UpdateCoefficients& coeffs);

/// Rank-two update of H for replacing row/column t of W by omega. Throws
/// DegenerateUpdateError when |sigma| is below sigma_threshold.
[[nodiscard]] KktFactor apply_inverse_update(const KktFactor& factor, const UpdateCoefficients& coeffs,
                                             std::size_t t);

}  // namespace h2dfo
