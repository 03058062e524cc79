#include "h2dfo/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "h2dfo/errors.hpp"

namespace h2dfo {

double EtaCoefficients::a_entry(const Vector& di, const Vector& dj) const {
  const double dn = static_cast<double>(n);
  const double ip = di.dot(dj);
  return ip * ip / (8.0 * eta1) -
         eta3 / (8.0 * eta1 * (dn * eta3 + eta1)) * di.squaredNorm() * dj.squaredNorm();
}

double EtaCoefficients::j_entry(const Vector& d) const {
  const double dn = static_cast<double>(n);
  return 1.0 - eta4 / (4.0 * dn * eta3 + 4.0 * eta1) * d.squaredNorm();
}

double EtaCoefficients::center_scalar() const {
  const double dn = static_cast<double>(n);
  return dn * eta4 * eta4 / (2.0 * dn * eta3 + 2.0 * eta1) - 2.0 * eta5;
}

bool EtaCoefficients::frobenius_mode() const {
  return eta2 == 0.0 && eta3 == 0.0 && eta4 == 0.0 && eta5 == 0.0;
}

EtaCoefficients eta_from_weights(const SobolevWeights& weights, double r, std::size_t n) {
  if (!weights.valid()) throw ContractViolation("eta_from_weights: invalid weights");
  if (!(r > 0.0) || !std::isfinite(r)) throw ContractViolation("eta_from_weights: r must be positive");
  if (n < 1) throw ContractViolation("eta_from_weights: n must be >= 1");
  const double dn = static_cast<double>(n);
  const double r2 = r * r;
  const double r4 = r2 * r2;
  EtaCoefficients e;
  e.eta1 = weights.c1 * r4 / (2.0 * (dn + 4.0) * (dn + 2.0)) + weights.c2 * r2 / (dn + 2.0) + weights.c3;
  e.eta2 = weights.c1 * r2 / (dn + 2.0) + weights.c2;
  e.eta3 = weights.c1 * r4 / (4.0 * (dn + 4.0) * (dn + 2.0));
  e.eta4 = weights.c1 * r2 / (dn + 2.0);
  e.eta5 = weights.c1;
  e.r = r;
  e.n = n;
  return e;
}

namespace {

void require_same_base(const KktFactor& factor, const InterpolationSet& set) {
  if (set.base().size() != factor.base.size() || set.base() != factor.base) {
    throw ContractViolation("KKT: interpolation set and factor use different base points");
  }
}

Matrix build_w(const InterpolationSet& set, const EtaCoefficients& eta) {
  const std::size_t m = set.size();
  const std::size_t n = set.dim();
  if (eta.n != n) throw ContractViolation("assemble_w: eta built for a different dimension");
  const auto N = static_cast<Eigen::Index>(m + n + 1);
  const auto im = static_cast<Eigen::Index>(m);
  Matrix w = Matrix::Zero(N, N);
  std::vector<Vector> d(m);
  for (std::size_t i = 0; i < m; ++i) d[i] = set.offset(i);
  for (std::size_t i = 0; i < m; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j <= i; ++j) {
      const double a = eta.a_entry(d[i], d[j]);
      w(ii, static_cast<Eigen::Index>(j)) = a;
      w(static_cast<Eigen::Index>(j), ii) = a;
    }
    const double jv = eta.j_entry(d[i]);
    w(ii, im) = jv;
    w(im, ii) = jv;
    w.block(ii, im + 1, 1, static_cast<Eigen::Index>(n)) = d[i].transpose();
    w.block(im + 1, ii, static_cast<Eigen::Index>(n), 1) = d[i];
  }
  w(im, im) = eta.center_scalar();
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = im + 1 + static_cast<Eigen::Index>(k);
    w(kk, kk) = -2.0 * eta.eta2;
  }
  return w;
}

}  // namespace

Vector symmetric_equilibration(const Matrix& m) {
  const Eigen::Index n = m.rows();
  Vector d = Vector::Ones(n);
  Matrix s = m;
  for (int iter = 0; iter < 50; ++iter) {
    double worst = 0.0;
    Vector step(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double rmax = s.row(i).cwiseAbs().maxCoeff();
      step[i] = rmax > 0.0 ? 1.0 / std::sqrt(rmax) : 1.0;
      if (rmax > 0.0) worst = std::max(worst, std::abs(1.0 - rmax));
    }
    d = d.cwiseProduct(step);
    s = step.asDiagonal() * s * step.asDiagonal();
    if (worst < 1e-3) break;
  }
  return d;
}

double equilibrated_condition(const Matrix& m) {
  if (!m.allFinite()) return std::numeric_limits<double>::infinity();
  const Vector d = symmetric_equilibration(m);
  const Matrix s = d.asDiagonal() * m * d.asDiagonal();
  Eigen::JacobiSVD<Matrix> svd(s);
  const Vector& sv = svd.singularValues();
  const double smax = sv[0];
  const double smin = sv[sv.size() - 1];
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

double KktFactor::residual() const {
  const Matrix r = w * h - Matrix::Identity(w.rows(), w.cols());
  return r.cwiseAbs().maxCoeff();
}

double KktFactor::scaled_residual() const {
  Matrix r = w * h - Matrix::Identity(w.rows(), w.cols());
  if (scaling.size() == r.rows()) {
    r = scaling.asDiagonal() * r * scaling.cwiseInverse().asDiagonal();
  }
  return r.cwiseAbs().maxCoeff();
}

bool KktFactor::residual_ok() const {
  return residual() <= kResidualTolerance * w.cwiseAbs().maxCoeff();
}

KktFactor assemble_w(const InterpolationSet& set, const EtaCoefficients& eta, BetaForm beta_form) {
  KktFactor f;
  f.w = build_w(set, eta);
  f.eta = eta;
  f.base = set.base();
  f.frobenius_mode = eta.frobenius_mode();
  f.beta_form = beta_form;
  // Scale by the spread of the points first: A ~ l^4, X ~ l.
  double l = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) l = std::max(l, set.offset(i).norm());
  if (!(l > 0.0) || !std::isfinite(l)) l = 1.0;
  const auto im = static_cast<Eigen::Index>(set.size());
  Vector pre(f.w.rows());
  pre.head(im).setConstant(1.0 / (l * l));
  pre[im] = l * l;
  pre.tail(static_cast<Eigen::Index>(set.dim())).setConstant(l);
  const Matrix prescaled = pre.asDiagonal() * f.w * pre.asDiagonal();
  f.scaling = pre.cwiseProduct(symmetric_equilibration(prescaled));

  const Matrix scaled = f.scaling.asDiagonal() * f.w * f.scaling.asDiagonal();
  Eigen::PartialPivLU<Matrix> lu(scaled);
  const double rcond = lu.rcond();
  if (!(rcond * kConditionLimit >= 1.0) || !std::isfinite(rcond)) {
    throw NotPoisedError("assemble_w: KKT matrix is singular (rcond " + std::to_string(rcond) + ")");
  }
  Matrix inv = lu.inverse();
  inv = 0.5 * (inv + inv.transpose()).eval();
  f.h = f.scaling.asDiagonal() * inv * f.scaling.asDiagonal();
  f.build_residual = f.scaled_residual();
  if (!f.h.allFinite() || !(f.build_residual <= kFactorTolerance)) {
    throw NotPoisedError("assemble_w: inverse of the KKT matrix is inaccurate");
  }
  return f;
}

bool invertibility_check(const InterpolationSet& set, const EtaCoefficients& eta) {
  const Matrix w = build_w(set, eta);
  if (!(eta.eta2 > 0.0)) return equilibrated_condition(w) <= kConditionLimit;

  const auto m = static_cast<Eigen::Index>(set.size());
  const auto n = static_cast<Eigen::Index>(set.dim());
  const Matrix x = w.block(0, m + 1, m, n);
  Matrix schur(m + 1, m + 1);
  schur.topLeftCorner(m, m) = w.topLeftCorner(m, m) + x * x.transpose() / (2.0 * eta.eta2);
  schur.block(0, m, m, 1) = w.block(0, m, m, 1);
  schur.block(m, 0, 1, m) = w.block(m, 0, 1, m);
  schur(m, m) = w(m, m);
  return equilibrated_condition(schur) <= kConditionLimit;
}

Vector omega_vector(const KktFactor& factor, const InterpolationSet& set, const Point& x_new) {
  require_same_base(factor, set);
  if (x_new.size() != set.base().size()) throw ContractViolation("omega_vector: dimension mismatch");
  const std::size_t m = set.size();
  const std::size_t n = set.dim();
  if (factor.m() != m) throw ContractViolation("omega_vector: factor and set sizes differ");
  const Vector dn = x_new - set.base();
  Vector omega(static_cast<Eigen::Index>(m + n + 1));
  for (std::size_t i = 0; i < m; ++i) {
    omega[static_cast<Eigen::Index>(i)] = factor.eta.a_entry(set.offset(i), dn);
  }
  omega[static_cast<Eigen::Index>(m)] = factor.eta.j_entry(dn);
  omega.tail(static_cast<Eigen::Index>(n)) = dn;
  return omega;
}

UpdateCoefficients update_coefficients(const KktFactor& factor, const Vector& omega, std::size_t t,
                                       const Point& x_new) {
  if (t >= factor.m()) throw ContractViolation("update_coefficients: index out of range");
  if (omega.size() != factor.h.rows()) throw ContractViolation("update_coefficients: omega size");
  const auto tt = static_cast<Eigen::Index>(t);
  const Vector dn = x_new - factor.base;

  UpdateCoefficients c;
  c.omega = omega;
  c.h_omega = factor.h * omega;
  // One refinement step: beta cancels heavily when x_new is nearly representable.
  c.h_omega += factor.h * (omega - factor.w * c.h_omega);
  c.new_diagonal = factor.eta.a_entry(dn, dn);
  const double lead = factor.beta_form == BetaForm::kAssembled
                          ? c.new_diagonal
                          : dn.squaredNorm() * dn.squaredNorm() / (8.0 * factor.eta.eta1);
  c.alpha = factor.h(tt, tt);
  c.tau = c.h_omega[tt];
  c.beta = lead - omega.dot(c.h_omega);
  c.sigma = c.alpha * c.beta + c.tau * c.tau;
  return c;
}

double sigma_threshold(const UpdateCoefficients& coeffs) {
  return 1e-12 * std::max({1.0, std::abs(coeffs.alpha) * std::abs(coeffs.beta), coeffs.tau * coeffs.tau});
}

bool is_degenerate(const UpdateCoefficients& coeffs) {
  return !(std::abs(coeffs.sigma) > sigma_threshold(coeffs));
}

KktFactor apply_inverse_update(const KktFactor& factor, const UpdateCoefficients& coeffs, std::size_t t) {
  if (t >= factor.m()) throw ContractViolation("apply_inverse_update: index out of range");
  if (is_degenerate(coeffs)) {
    throw DegenerateUpdateError("apply_inverse_update: |sigma| = " + std::to_string(std::abs(coeffs.sigma)) +
                                " is below the degeneracy guard");
  }
  const auto tt = static_cast<Eigen::Index>(t);
  const Vector& h = factor.h.col(tt);
  Vector u = -coeffs.h_omega;
  u[tt] += 1.0;

  KktFactor out = factor;
  const double inv_sigma = 1.0 / coeffs.sigma;
  out.h.noalias() += inv_sigma * (coeffs.alpha * u * u.transpose() - coeffs.beta * h * h.transpose() +
                                  coeffs.tau * (h * u.transpose() + u * h.transpose()));
  out.h = 0.5 * (out.h + out.h.transpose()).eval();

  out.w.col(tt) = coeffs.omega;
  out.w.row(tt) = coeffs.omega.transpose();
  out.w(tt, tt) = coeffs.new_diagonal;
  return out;
}

}  // namespace h2dfo
