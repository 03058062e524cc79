#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace h2dfo {

using Point = Eigen::VectorXd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Black-box objective f: R^n -> R.
using Objective = std::function<double(const Point&)>;

/// Number of entries of a packed lower triangle of an n x n matrix.
constexpr std::size_t packed_size(std::size_t n) { return n * (n + 1) / 2; }

/// Quadratic c + (x - x0)'g + 1/2 (x - x0)'G (x - x0) anchored at the base x0.
///
/// The Hessian is kept as a packed lower triangle (row-major, entry (i, j)
/// with i >= j at i(i+1)/2 + j), so G' = G holds by construction.
class QuadraticModel {
 public:
  QuadraticModel() = default;

  /// Zero model anchored at `base`.
  explicit QuadraticModel(Point base);

  /// Takes the lower triangle of `hess`; the upper triangle is ignored.
  QuadraticModel(Point base, double const_term, Vector grad, const Matrix& hess);

  static QuadraticModel from_packed(Point base, double const_term, Vector grad,
                                    std::vector<double> hess_packed);

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(base_.size()); }
  [[nodiscard]] const Point& base() const { return base_; }
  [[nodiscard]] double const_term() const { return c_; }
  [[nodiscard]] const Vector& grad() const { return g_; }
  [[nodiscard]] const std::vector<double>& hess_packed() const { return hess_; }

  [[nodiscard]] double hess(std::size_t i, std::size_t j) const;
  [[nodiscard]] Matrix hess_matrix() const;
  [[nodiscard]] Vector hess_vec(const Vector& v) const;
  [[nodiscard]] double trace() const;
  [[nodiscard]] double hess_frobenius_sq() const;

  /// Coefficient-wise sum; both models must share the same base.
  [[nodiscard]] QuadraticModel operator+(const QuadraticModel& other) const;
  [[nodiscard]] QuadraticModel operator-(const QuadraticModel& other) const;
  QuadraticModel& operator+=(const QuadraticModel& other);

  [[nodiscard]] bool is_finite() const;

 private:
  Point base_;
  double c_ = 0.0;
  Vector g_;
  std::vector<double> hess_;
};

/// Euclidean ball B(center, radius).
struct BallRegion {
  Point center;
  double radius = 1.0;

  BallRegion(Point c, double r);
};

/// Weights of the H0 norm and the H1, H2 seminorms in the combined objective.
struct SobolevWeights {
  double c1 = 1.0 / 3.0;
  double c2 = 1.0 / 3.0;
  double c3 = 1.0 / 3.0;

  [[nodiscard]] bool valid() const;
  /// Weights that reduce the objective to ||G||_F^2.
  static SobolevWeights frobenius() { return {0.0, 0.0, 1.0}; }
};

struct SobolevNorms {
  double h0_sq = 0.0;
  double h1_sq = 0.0;
  double h2_sq = 0.0;
  double weighted = 0.0;
};

[[nodiscard]] double evaluate(const QuadraticModel& model, const Point& x);
[[nodiscard]] Vector gradient(const QuadraticModel& model, const Point& x);

/// Re-expresses the same function about `new_base`.
[[nodiscard]] QuadraticModel shift_base(const QuadraticModel& model, const Point& new_base);

/// log of the volume of the n-dimensional unit ball, via lgamma.
[[nodiscard]] double log_unit_ball_volume(std::size_t n);
[[nodiscard]] double unit_ball_volume(std::size_t n);

/// Closed-form squared Sobolev (semi)norms of a quadratic on a ball centred
/// at the model's base. Throws ContractViolation if base != center.
[[nodiscard]] SobolevNorms sobolev_norm_sq(const QuadraticModel& model, const BallRegion& region,
                                           const SobolevWeights& weights);

}  // namespace h2dfo
