#include "h2dfo/model_update.hpp"

#include <algorithm>
#include <cmath>

#include "h2dfo/errors.hpp"

namespace h2dfo {

QuadraticModel UpdateSolution::to_model(const Point& base) const {
  return QuadraticModel(base, c, g, hess);
}

UpdateSolution solve_rhs(const KktFactor& factor, const InterpolationSet& set, const Vector& rhs) {
  const std::size_t m = set.size();
  const std::size_t n = set.dim();
  if (factor.m() != m || factor.eta.n != n) throw ContractViolation("solve_rhs: factor does not match set");
  if (static_cast<std::size_t>(rhs.size()) != m) throw ContractViolation("solve_rhs: rhs must have m entries");
  if (set.base() != factor.base) throw ContractViolation("solve_rhs: factor and set use different bases");

  const auto im = static_cast<Eigen::Index>(m);
  const auto in = static_cast<Eigen::Index>(n);
  Vector full = Vector::Zero(im + in + 1);
  full.head(im) = rhs;
  const Vector sol = factor.h * full;

  const EtaCoefficients& e = factor.eta;
  const double dn = static_cast<double>(n);
  UpdateSolution out;
  out.lambda = sol.head(im);
  out.c = sol[im];
  out.g = sol.tail(in);

  double weighted_sq = 0.0;
  Matrix outer = Matrix::Zero(in, in);
  for (std::size_t l = 0; l < m; ++l) {
    const Vector d = set.offset(l);
    const double lam = out.lambda[static_cast<Eigen::Index>(l)];
    weighted_sq += lam * d.squaredNorm();
    outer.noalias() += lam * d * d.transpose();
  }
  out.trace_t = weighted_sq / (2.0 * (2.0 * dn * e.eta3 + 2.0 * e.eta1)) -
                dn * e.eta4 / (2.0 * dn * e.eta3 + 2.0 * e.eta1) * out.c;
  out.hess = (0.5 * outer - (2.0 * e.eta3 * out.trace_t + e.eta4 * out.c) * Matrix::Identity(in, in)) /
             (2.0 * e.eta1);
  out.hess = 0.5 * (out.hess + out.hess.transpose()).eval();
  return out;
}

double interpolation_error(const QuadraticModel& model, const InterpolationSet& set, const Vector& targets) {
  double worst = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double want = targets[static_cast<Eigen::Index>(i)];
    worst = std::max(worst, std::abs(evaluate(model, set.point(i)) - want) / std::max(1.0, std::abs(want)));
  }
  return worst;
}

UpdateSolution solve_update(const KktFactor& factor, const InterpolationSet& set, std::size_t t,
                            const Point& x_new, double residual) {
  if (t >= set.size()) throw ContractViolation("solve_update: index out of range");
  if (!same_point(set.point(t), x_new)) {
    throw ContractViolation("solve_update: slot t of the set must already hold x_new");
  }
  Vector rhs = Vector::Zero(static_cast<Eigen::Index>(set.size()));
  rhs[static_cast<Eigen::Index>(t)] = residual;
  UpdateSolution sol = solve_rhs(factor, set, rhs);

  const QuadraticModel d = sol.to_model(set.base());
  const double tol = kResidualTolerance * std::max(1.0, std::abs(residual));
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double want = i == t ? residual : 0.0;
    if (!(std::abs(evaluate(d, set.point(i)) - want) <= tol)) {
      throw StaleFactorError("solve_update: update misses the interpolation conditions; refactorize");
    }
  }
  return sol;
}

QuadraticModel build_initial_model(const KktFactor& factor, const InterpolationSet& set) {
  Vector rhs(static_cast<Eigen::Index>(set.size()));
  for (std::size_t i = 0; i < set.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = set.value(i);
  QuadraticModel q = solve_rhs(factor, set, rhs).to_model(set.base());
  if (!(interpolation_error(q, set, rhs) <= kResidualTolerance)) {
    throw NotPoisedError("build_initial_model: initial model does not interpolate the data");
  }
  return q;
}

QuadraticModel build_initial_model(const InterpolationSet& set, const EtaCoefficients& eta) {
  return build_initial_model(assemble_w(set, eta), set);
}

}  // namespace h2dfo
