#include "h2dfo/quadratic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "h2dfo/errors.hpp"

namespace h2dfo {
namespace {

std::size_t packed_index(std::size_t i, std::size_t j) {
  if (i < j) std::swap(i, j);
  return i * (i + 1) / 2 + j;
}

void require_dim(std::size_t expected, Eigen::Index got, const char* what) {
  if (static_cast<std::size_t>(got) != expected) {
    throw ContractViolation(std::string(what) + ": dimension mismatch (expected " +
                            std::to_string(expected) + ", got " + std::to_string(got) + ")");
  }
}

}  // namespace

QuadraticModel::QuadraticModel(Point base)
    : base_(std::move(base)), g_(Vector::Zero(base_.size())),
      hess_(packed_size(static_cast<std::size_t>(base_.size())), 0.0) {
  if (base_.size() < 1) throw ContractViolation("QuadraticModel: dimension must be >= 1");
}

QuadraticModel::QuadraticModel(Point base, double const_term, Vector grad, const Matrix& hess)
    : QuadraticModel(std::move(base)) {
  const std::size_t n = dim();
  require_dim(n, grad.size(), "QuadraticModel gradient");
  require_dim(n, hess.rows(), "QuadraticModel hessian rows");
  require_dim(n, hess.cols(), "QuadraticModel hessian cols");
  c_ = const_term;
  g_ = std::move(grad);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      hess_[packed_index(i, j)] = hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
}

QuadraticModel QuadraticModel::from_packed(Point base, double const_term, Vector grad,
                                           std::vector<double> hess_packed) {
  QuadraticModel q(std::move(base));
  require_dim(q.dim(), grad.size(), "QuadraticModel gradient");
  if (hess_packed.size() != packed_size(q.dim())) {
    throw ContractViolation("QuadraticModel: packed hessian has wrong length");
  }
  q.c_ = const_term;
  q.g_ = std::move(grad);
  q.hess_ = std::move(hess_packed);
  return q;
}

double QuadraticModel::hess(std::size_t i, std::size_t j) const { return hess_[packed_index(i, j)]; }

Matrix QuadraticModel::hess_matrix() const {
  const std::size_t n = dim();
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = hess_[packed_index(i, j)];
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  return h;
}

Vector QuadraticModel::hess_vec(const Vector& v) const {
  const std::size_t n = dim();
  require_dim(n, v.size(), "hess_vec");
  Vector out = Vector::Zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t row = i * (i + 1) / 2;
    for (std::size_t j = 0; j < i; ++j) {
      const double h = hess_[row + j];
      out[i] += h * v[j];
      out[j] += h * v[i];
    }
    out[i] += hess_[row + i] * v[i];
  }
  return out;
}

double QuadraticModel::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += hess_[i * (i + 1) / 2 + i];
  return t;
}

double QuadraticModel::hess_frobenius_sq() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    const std::size_t row = i * (i + 1) / 2;
    for (std::size_t j = 0; j < i; ++j) s += 2.0 * hess_[row + j] * hess_[row + j];
    s += hess_[row + i] * hess_[row + i];
  }
  return s;
}

QuadraticModel QuadraticModel::operator+(const QuadraticModel& other) const {
  QuadraticModel out = *this;
  out += other;
  return out;
}

QuadraticModel QuadraticModel::operator-(const QuadraticModel& other) const {
  if (other.base_.size() != base_.size() || other.base_ != base_) {
    throw ContractViolation("QuadraticModel: difference of models with different bases");
  }
  QuadraticModel out = *this;
  out.c_ -= other.c_;
  out.g_ -= other.g_;
  for (std::size_t k = 0; k < hess_.size(); ++k) out.hess_[k] -= other.hess_[k];
  return out;
}

QuadraticModel& QuadraticModel::operator+=(const QuadraticModel& other) {
  if (other.base_.size() != base_.size() || other.base_ != base_) {
    throw ContractViolation("QuadraticModel: sum of models with different bases");
  }
  c_ += other.c_;
  g_ += other.g_;
  for (std::size_t k = 0; k < hess_.size(); ++k) hess_[k] += other.hess_[k];
  return *this;
}

bool QuadraticModel::is_finite() const {
  if (!std::isfinite(c_) || !g_.allFinite() || !base_.allFinite()) return false;
  for (double h : hess_) {
    if (!std::isfinite(h)) return false;
  }
  return true;
}

BallRegion::BallRegion(Point c, double r) : center(std::move(c)), radius(r) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ContractViolation("BallRegion: radius must be positive and finite");
  }
}

bool SobolevWeights::valid() const {
  return c1 >= 0.0 && c2 >= 0.0 && c3 >= 0.0 && (c1 + c2 + c3) > 0.0 && std::isfinite(c1) &&
         std::isfinite(c2) && std::isfinite(c3);
}

double evaluate(const QuadraticModel& model, const Point& x) {
  require_dim(model.dim(), x.size(), "evaluate");
  const Vector s = x - model.base();
  return model.const_term() + s.dot(model.grad()) + 0.5 * s.dot(model.hess_vec(s));
}

Vector gradient(const QuadraticModel& model, const Point& x) {
  require_dim(model.dim(), x.size(), "gradient");
  const Vector s = x - model.base();
  return model.grad() + model.hess_vec(s);
}

QuadraticModel shift_base(const QuadraticModel& model, const Point& new_base) {
  require_dim(model.dim(), new_base.size(), "shift_base");
  const Vector s = new_base - model.base();
  const Vector hs = model.hess_vec(s);
  const double c = model.const_term() + s.dot(model.grad()) + 0.5 * s.dot(hs);
  return QuadraticModel::from_packed(new_base, c, model.grad() + hs, model.hess_packed());
}

double log_unit_ball_volume(std::size_t n) {
  const double half_n = 0.5 * static_cast<double>(n);
  return half_n * std::log(std::numbers::pi) - std::lgamma(half_n + 1.0);
}

double unit_ball_volume(std::size_t n) { return std::exp(log_unit_ball_volume(n)); }

SobolevNorms sobolev_norm_sq(const QuadraticModel& model, const BallRegion& region,
                             const SobolevWeights& weights) {
  require_dim(model.dim(), region.center.size(), "sobolev_norm_sq");
  if (model.base() != region.center) {
    throw ContractViolation("sobolev_norm_sq: model base must equal the ball center; shift first");
  }
  if (!weights.valid()) throw ContractViolation("sobolev_norm_sq: invalid weights");

  const double n = static_cast<double>(model.dim());
  const double r = region.radius;
  const double r2 = r * r;
  const double r4 = r2 * r2;
  const double scale = std::exp(log_unit_ball_volume(model.dim()) + n * std::log(r));

  const double gf2 = model.hess_frobenius_sq();
  const double g2 = model.grad().squaredNorm();
  const double tr = model.trace();
  const double c = model.const_term();

  SobolevNorms out;
  out.h0_sq = scale * (r4 / (2.0 * (n + 2.0) * (n + 4.0)) * gf2 + r2 / (n + 2.0) * g2 +
                       r4 / (4.0 * (n + 2.0) * (n + 4.0)) * tr * tr + r2 / (n + 2.0) * c * tr + c * c);
  out.h1_sq = scale * (r2 / (n + 2.0) * gf2 + g2);
  out.h2_sq = scale * gf2;
  out.weighted = weights.c1 * out.h0_sq + weights.c2 * out.h1_sq + weights.c3 * out.h2_sq;
  return out;
}

}  // namespace h2dfo
