#include "h2dfo/subproblems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "h2dfo/errors.hpp"
#include "h2dfo/model_update.hpp"

namespace h2dfo {
namespace {

// Largest tau >= 0 with ||d + tau p|| = delta.
double boundary_step(const Vector& d, const Vector& p, double delta) {
  const double pp = p.squaredNorm();
  const double dp = d.dot(p);
  const double dd = d.squaredNorm();
  const double disc = std::max(0.0, dp * dp + pp * (delta * delta - dd));
  // Stable form of (-dp + sqrt(disc)) / pp.
  if (dp > 0.0) return (delta * delta - dd) / (dp + std::sqrt(disc));
  return (-dp + std::sqrt(disc)) / pp;
}

// Eigenvector of the smallest eigenvalue of G restricted to the complement of u
// (u = 0: the whole space).
Vector least_curvature(const QuadraticModel& model, const Vector& u) {
  const auto n = u.size();
  const Matrix proj = Matrix::Identity(n, n) - u * u.transpose();
  const Matrix h = proj * model.hess_matrix() * proj;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (h + h.transpose()));
  for (Eigen::Index k = 0; k < n; ++k) {
    const Vector v = proj * eig.eigenvectors().col(k);
    if (v.norm() > 0.5) return v / v.norm();
  }
  return Vector::Zero(n);
}

// Rotates d on the sphere ||d|| = delta within span{d, grad Q(center + d)}.
bool boundary_sweep(const QuadraticModel& model, const Vector& g, Vector& d, double delta) {
  const Vector gd = g + model.hess_vec(d);
  const double dd = d.squaredNorm();
  Vector s = gd - (gd.dot(d) / dd) * d;
  double sn = s.norm();
  if (sn <= 1e-12 * gd.norm() || sn == 0.0) {
    // Stationary on the sphere: rotate towards the tangent direction of least curvature.
    s = least_curvature(model, d / std::sqrt(dd));
    sn = s.norm();
    if (sn == 0.0) return false;
  }
  s *= -delta / sn;

  const Vector hd = model.hess_vec(d);
  const Vector hs = model.hess_vec(s);
  const double g_d = g.dot(d);
  const double g_s = g.dot(s);
  const double dhd = d.dot(hd);
  const double dhs = d.dot(hs);
  const double shs = s.dot(hs);
  auto q = [&](double th) {
    const double c = std::cos(th);
    const double sn_ = std::sin(th);
    return c * g_d + sn_ * g_s + 0.5 * (c * c * dhd + 2.0 * sn_ * c * dhs + sn_ * sn_ * shs);
  };

  constexpr int kSamples = 96;
  const double step = 2.0 * std::numbers::pi / kSamples;
  int best = 0;
  double best_q = q(0.0);
  for (int k = 1; k < kSamples; ++k) {
    const double v = q(k * step);
    if (v < best_q) {
      best_q = v;
      best = k;
    }
  }
  double theta = best * step;
  // parabolic refinement through the neighbouring samples
  const double qm = q(theta - step);
  const double q0 = q(theta);
  const double qp = q(theta + step);
  const double denom = qm - 2.0 * q0 + qp;
  if (denom > 0.0) {
    const double shift = 0.5 * step * (qm - qp) / denom;
    if (std::abs(shift) < step && q(theta + shift) < q0) theta += shift;
  }
  const double q_base = q(0.0);
  const double q_new = q(theta);
  if (!(q_new < q_base - 1e-14 * std::max(1.0, std::abs(q_base)))) return false;
  d = std::cos(theta) * d + std::sin(theta) * s;
  const double dn = d.norm();
  if (dn > delta) d *= delta / dn;
  return true;
}

}  // namespace

TrialStep solve_trsp(const QuadraticModel& model, const Point& center, double delta,
                     const TrspOptions& options) {
  if (!(delta > 0.0)) throw ContractViolation("solve_trsp: delta must be positive");
  const std::size_t n = model.dim();
  const Vector g = gradient(model, center);
  TrialStep out;
  out.d = Vector::Zero(static_cast<Eigen::Index>(n));
  const double gnorm = g.norm();
  if (gnorm == 0.0 || !std::isfinite(gnorm)) return out;

  Vector d = Vector::Zero(static_cast<Eigen::Index>(n));
  Vector r = g;
  Vector p = -r;
  double rr = r.squaredNorm();
  const std::size_t max_iter = n + options.extra_iterations;
  for (std::size_t k = 0; k < max_iter; ++k) {
    const Vector hp = model.hess_vec(p);
    const double curv = p.dot(hp);
    if (curv <= 0.0) {
      d += boundary_step(d, p, delta) * p;
      out.on_boundary = true;
      break;
    }
    const double alpha = rr / curv;
    if ((d + alpha * p).norm() >= delta) {
      d += boundary_step(d, p, delta) * p;
      out.on_boundary = true;
      break;
    }
    d += alpha * p;
    r += alpha * hp;
    const double rr_new = r.squaredNorm();
    if (std::sqrt(rr_new) <= options.relative_tolerance * gnorm) break;
    p = -r + (rr_new / rr) * p;
    rr = rr_new;
  }

  if (!out.on_boundary) {
    // CG may stop at a saddle when g misses the negative eigenspace.
    Eigen::LLT<Matrix> llt(model.hess_matrix());
    if (llt.info() != Eigen::Success) {
      const Vector v = least_curvature(model, Vector::Zero(static_cast<Eigen::Index>(n)));
      if (v.dot(model.hess_vec(v)) < 0.0) {
        const Vector dir = g.dot(v) + v.dot(model.hess_vec(d)) > 0.0 ? Vector(-v) : v;
        d += boundary_step(d, dir, delta) * dir;
        out.on_boundary = true;
      }
    }
  }
  if (out.on_boundary) {
    for (std::size_t sweep = 0; sweep < options.boundary_sweeps; ++sweep) {
      if (!boundary_sweep(model, g, d, delta)) break;
    }
  }

  const double reduction = -(g.dot(d) + 0.5 * d.dot(model.hess_vec(d)));
  if (!(reduction >= 0.0)) return TrialStep{Vector::Zero(static_cast<Eigen::Index>(n)), 0.0, false};
  out.d = d;
  out.predicted_reduction = reduction;
  return out;
}

double sigma_of_step(const KktFactor& factor, const InterpolationSet& set, std::size_t t, const Point& center,
                     const Vector& d) {
  const Point x_new = center + d;
  const Vector omega = omega_vector(factor, set, x_new);
  return update_coefficients(factor, omega, t, x_new).sigma;
}

double sigma_of_step(const KktFactor& factor, const InterpolationSet& set, std::size_t t, const Vector& d) {
  return sigma_of_step(factor, set, t, set.best_point(), d);
}

std::vector<double> real_polynomial_roots(std::vector<double> coeffs) {
  double scale = 0.0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  while (!coeffs.empty() && std::abs(coeffs.back()) <= 1e-14 * scale) coeffs.pop_back();
  std::vector<double> roots;
  if (coeffs.size() < 2) return roots;
  const std::size_t deg = coeffs.size() - 1;
  if (deg == 1) {
    roots.push_back(-coeffs[0] / coeffs[1]);
    return roots;
  }
  Matrix companion = Matrix::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  for (std::size_t i = 1; i < deg; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  }
  for (std::size_t i = 0; i < deg; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) = -coeffs[i] / coeffs[deg];
  }
  Eigen::EigenSolver<Matrix> es(companion, false);
  const auto ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i].imag()) <= 1e-9 * std::max(1.0, std::abs(ev[i].real()))) roots.push_back(ev[i].real());
  }
  return roots;
}

std::vector<Vector> geometry_candidates(const KktFactor& factor, const InterpolationSet& set, std::size_t t,
                                        const Point& center, std::mt19937_64& rng) {
  const std::size_t n = set.dim();
  const auto in = static_cast<Eigen::Index>(n);
  std::vector<Vector> dirs;
  dirs.reserve(4 * n + 4);
  for (Eigen::Index i = 0; i < in; ++i) dirs.push_back(Vector::Unit(in, i));

  const Vector to_t = set.point(t) - center;
  if (to_t.norm() > 0.0) dirs.push_back(to_t.normalized());

  Vector et = Vector::Zero(static_cast<Eigen::Index>(set.size()));
  et[static_cast<Eigen::Index>(t)] = 1.0;
  const QuadraticModel lagrange = solve_rhs(factor, set, et).to_model(set.base());
  const Vector lg = gradient(lagrange, center);
  if (lg.allFinite() && lg.norm() > 0.0) dirs.push_back(lg.normalized());

  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t k = 0; k < 2 * n; ++k) {
    Vector v(in);
    for (Eigen::Index i = 0; i < in; ++i) v[i] = normal(rng);
    if (v.norm() > 0.0) dirs.push_back(v.normalized());
  }
  return dirs;
}

GeometryStep improve_geometry(const KktFactor& factor, const InterpolationSet& set, std::size_t t,
                              const Point& center, double delta, std::mt19937_64& rng) {
  if (!(delta > 0.0)) throw ContractViolation("improve_geometry: delta must be positive");
  if (t >= set.size()) throw ContractViolation("improve_geometry: index out of range");

  auto score = [&](const Vector& d) {
    const Point x_new = center + d;
    return update_coefficients(factor, omega_vector(factor, set, x_new), t, x_new);
  };

  GeometryStep best;
  UpdateCoefficients best_coeffs;
  Vector best_dir;
  bool have = false;
  for (const Vector& u : geometry_candidates(factor, set, t, center, rng)) {
    for (double sign : {1.0, -1.0}) {
      const Vector d = sign * delta * u;
      if (set.find(center + d, set.size()) < set.size()) continue;
      const UpdateCoefficients c = score(d);
      if (!std::isfinite(c.sigma)) continue;
      if (!have || std::abs(c.sigma) > std::abs(best.sigma)) {
        best = GeometryStep{d, c.sigma};
        best_coeffs = c;
        best_dir = u;
        have = true;
      }
    }
  }
  if (!have) throw GeometryFailure("improve_geometry: no finite candidate");

  // sigma along the line center + s u is a quartic in s; fit it on five
  // nodes of the normalized variable s / delta and maximize |sigma| over
  // delta/2 <= |s| <= delta.
  const std::array<double, 5> nodes{-1.0, -0.5, 0.0, 0.5, 1.0};
  Matrix vander(5, 5);
  Vector vals(5);
  for (int i = 0; i < 5; ++i) {
    double p = 1.0;
    for (int j = 0; j < 5; ++j) {
      vander(i, j) = p;
      p *= nodes[static_cast<std::size_t>(i)];
    }
    vals[i] = score(nodes[static_cast<std::size_t>(i)] * delta * best_dir).sigma;
  }
  if (vals.allFinite()) {
    const Vector coef = vander.partialPivLu().solve(vals);
    const std::vector<double> deriv{coef[1], 2.0 * coef[2], 3.0 * coef[3], 4.0 * coef[4]};
    for (double u : real_polynomial_roots(deriv)) {
      if (std::abs(u) < 0.5 || std::abs(u) > 1.0) continue;
      const Vector d = u * delta * best_dir;
      const UpdateCoefficients c = score(d);
      if (std::isfinite(c.sigma) && std::abs(c.sigma) > std::abs(best.sigma)) {
        best = GeometryStep{d, c.sigma};
        best_coeffs = c;
      }
    }
  }

  if (is_degenerate(best_coeffs)) {
    throw GeometryFailure("improve_geometry: every candidate step gives a degenerate update");
  }
  return best;
}

GeometryStep improve_geometry(const KktFactor& factor, const InterpolationSet& set, std::size_t t,
                              double delta, std::mt19937_64& rng) {
  return improve_geometry(factor, set, t, set.best_point(), delta, rng);
}

}  // namespace h2dfo
