#include "h2dfo/driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <utility>

#include "h2dfo/errors.hpp"
#include "h2dfo/interpolation_set.hpp"
#include "h2dfo/model_update.hpp"
#include "h2dfo/subproblems.hpp"

namespace h2dfo {

std::string to_string(ModelKind kind) { return kind == ModelKind::kH2 ? "h2" : "frobenius"; }

ModelKind parse_model_kind(const std::string& text) {
  if (text == "h2") return ModelKind::kH2;
  if (text == "frobenius") return ModelKind::kFrobenius;
  throw std::invalid_argument("unknown model kind '" + text + "' (expected h2 or frobenius)");
}

std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kRadius: return "radius";
    case TerminationReason::kGradientRadius: return "gradient+radius";
    case TerminationReason::kBudget: return "budget";
    case TerminationReason::kGeometryFailure: return "geometry_failure";
  }
  return "unknown";
}

void TrustRegionConfig::validate(std::size_t n) const {
  if (n < 1) throw ContractViolation("config: dimension must be >= 1");
  if (!(delta0 > 0.0)) throw ContractViolation("config: delta0 must be positive");
  if (!(gamma > 1.0)) throw ContractViolation("config: gamma must exceed 1");
  if (!(eta_hat1 > 0.0 && eta_hat1 < eta_hat2 && eta_hat2 < 1.0)) {
    throw ContractViolation("config: need 0 < eta_hat1 < eta_hat2 < 1");
  }
  if (!(mu > 0.0)) throw ContractViolation("config: mu must be positive");
  if (!(eps_c > 0.0)) throw ContractViolation("config: eps_c must be positive");
  if (model_kind == ModelKind::kH2 && !weights.valid()) throw ContractViolation("config: invalid weights");
  const std::size_t mm = points_for(n);
  if (mm < 1 || mm > InterpolationSet::max_points(n)) {
    throw ContractViolation("config: m must lie in [1, (n+1)(n+2)/2]");
  }
  if (model_kind == ModelKind::kFrobenius && mm < n + 1) {
    throw ContractViolation("config: the Frobenius model needs m >= n+1");
  }
  if (!initial_points.empty() && initial_points.size() != mm) {
    throw ContractViolation("config: initial_points must hold exactly m points");
  }
  if (budget_for(n) < mm) throw ContractViolation("config: max_nf must be at least m");
}

double acceptance_ratio(double f_old, double f_new, double q_old, double q_new) {
  const double pred = q_old - q_new;
  if (!(pred > kPredictedReductionGuard * std::max(1.0, std::abs(q_old)))) {
    return -std::numeric_limits<double>::infinity();
  }
  return (f_old - f_new) / pred;
}

double update_radius(double delta, double rho, const TrustRegionConfig& cfg) {
  if (!(delta > 0.0)) throw ContractViolation("update_radius: delta must be positive");
  if (rho < cfg.eta_hat1 || std::isnan(rho)) return delta / cfg.gamma;
  if (rho > cfg.eta_hat2) return cfg.gamma * delta;
  return delta;
}

double step_radius(double delta, double rho, double step_norm, const TrustRegionConfig& cfg) {
  const double next = update_radius(delta, rho, cfg);
  if (rho < cfg.eta_hat1 || std::isnan(rho)) return next;
  const double reach = rho > cfg.eta_hat2 ? cfg.gamma * step_norm : step_norm;
  return std::min(next, std::max(delta / cfg.gamma, reach));
}

std::vector<Point> initial_points(const Point& x_int, std::size_t m) {
  const auto n = x_int.size();
  const std::size_t un = static_cast<std::size_t>(n);
  if (m < 1 || m > InterpolationSet::max_points(un)) {
    throw ContractViolation("initial_points: m must lie in [1, (n+1)(n+2)/2]");
  }
  std::vector<Point> pts;
  pts.reserve(m);
  pts.push_back(x_int);
  if (m == (un + 1) / 2 + 1 && m != 2 * un + 1) {
    for (Eigen::Index i = 0; pts.size() < m; ++i) pts.push_back(x_int + Vector::Unit(n, i));
    return pts;
  }
  for (Eigen::Index i = 0; i < n && pts.size() < m; ++i) {
    pts.push_back(x_int + Vector::Unit(n, i));
    if (pts.size() < m) pts.push_back(x_int - Vector::Unit(n, i));
  }
  for (Eigen::Index i = 0; i < n && pts.size() < m; ++i) {
    for (Eigen::Index j = i + 1; j < n && pts.size() < m; ++j) {
      pts.push_back(x_int + Vector::Unit(n, i) + Vector::Unit(n, j));
    }
  }
  return pts;
}

namespace {

class Solver {
 public:
  Solver(const Objective& f, const Point& x_int, const TrustRegionConfig& cfg)
      : f_(f), cfg_(cfg), n_(static_cast<std::size_t>(x_int.size())), budget_(cfg.budget_for(n_)),
        rng_(cfg.seed) {
    cfg_.validate(n_);
    if (!x_int.allFinite()) throw ContractViolation("run_solver: x_int must be finite");
    delta_ = cfg_.delta0;
  }

  SolveResult run(const Point& x_int) {
    initialize(x_int);
    result_.termination_reason = loop();
    result_.best_point = x_opt_;
    result_.best_value = f_opt_;
    result_.nf = history_.size();
    result_.history = history_;
    return result_;
  }

 private:
  double evaluate_point(const Point& x) {
    const double v = f_(x);
    const double fv = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    if (history_.empty() || fv < f_opt_) {
      f_opt_ = fv;
      x_opt_ = x;
    }
    history_.push_back(f_opt_);
    return fv;
  }

  [[nodiscard]] bool budget_left() const { return history_.size() < budget_; }

  [[nodiscard]] SobolevWeights weights() const {
    return cfg_.model_kind == ModelKind::kFrobenius ? SobolevWeights::frobenius() : cfg_.weights;
  }

  [[nodiscard]] double norm_radius() const {
    double far = 0.0;
    for (const Point& p : set_->points()) far = std::max(far, (p - x_opt_).norm());
    return std::max(10.0 * delta_, far);
  }

  void initialize(const Point& x_int) {
    const std::size_t m = cfg_.points_for(n_);
    std::vector<Point> pts = cfg_.initial_points.empty() ? initial_points(x_int, m) : cfg_.initial_points;
    std::vector<double> vals;
    vals.reserve(m);
    for (const Point& p : pts) {
      if (static_cast<std::size_t>(p.size()) != n_) throw ContractViolation("run_solver: initial point dimension");
      vals.push_back(evaluate_point(p));
    }
    for (double v : vals) {
      if (!std::isfinite(v)) throw ContractViolation("run_solver: objective is not finite at an initial point");
    }
    set_.emplace(std::move(pts), std::move(vals), x_int);
    factor_ = assemble_w(*set_, eta_from_weights(weights(), norm_radius(), n_), cfg_.beta_form);
    model_ = build_initial_model(factor_, *set_);
  }

  void refactor() {
    factor_ = assemble_w(*set_, eta_from_weights(weights(), norm_radius(), n_), cfg_.beta_form);
    ++result_.refactorizations;
    Vector resid(static_cast<Eigen::Index>(set_->size()));
    for (std::size_t i = 0; i < set_->size(); ++i) {
      resid[static_cast<Eigen::Index>(i)] = set_->value(i) - evaluate(model_, set_->point(i));
    }
    if (resid.cwiseAbs().maxCoeff() > 0.0) model_ += solve_rhs(factor_, *set_, resid).to_model(set_->base());
  }

  // With m <= n a model only counts once a geometry step has probed a new direction.
  [[nodiscard]] bool model_accepted() const {
    if (set_->size() <= n_ && !explored_) return false;
    for (const Point& p : set_->points()) {
      if ((p - x_opt_).norm() > 2.0 * delta_) return false;
    }
    return true;
  }

  [[nodiscard]] std::size_t drop_index() const {
    if (set_->size() == 1) return 0;
    return select_drop_index(*set_);
  }

  // Slots other than the best one, by decreasing
  // |sigma_j| max(1, (||x_j - x_opt|| / delta)^4).
  [[nodiscard]] std::vector<std::size_t> ranked_slots(const Point& x_new) const {
    const Vector omega = omega_vector(factor_, *set_, x_new);
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t j = 0; j < set_->size(); ++j) {
      if (set_->size() > 1 && j == set_->best_index()) continue;
      const double ratio = (set_->point(j) - x_opt_).squaredNorm() / (delta_ * delta_);
      const double s = std::abs(update_coefficients(factor_, omega, j, x_new).sigma) * std::max(1.0, ratio * ratio);
      scored.emplace_back(std::isfinite(s) ? s : -1.0, j);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
    std::vector<std::size_t> order;
    for (const auto& [score, j] : scored) order.push_back(j);
    return order;
  }

  struct Snapshot {
    std::optional<InterpolationSet> set;
    KktFactor factor;
    QuadraticModel model;
  };

  [[nodiscard]] Snapshot save() const { return {set_, factor_, model_}; }

  void restore(Snapshot&& s) {
    set_ = std::move(s.set);
    factor_ = std::move(s.factor);
    model_ = std::move(s.model);
  }

  bool try_refactor() {
    try {
      refactor();
    } catch (const NotPoisedError&) {
      return false;
    }
    return true;
  }

  // Puts (x_new, f_new) into slot t, or failing that into the next slot by
  // ranked_slots. Leaves the state untouched and returns false if no slot works.
  bool insert(std::size_t t, const Point& x_new, double f_new) {
    if (!std::isfinite(f_new)) return false;
    if (set_->find(x_new, set_->size()) < set_->size()) return false;
    if (insert_at(t, x_new, f_new)) return true;
    for (std::size_t j : ranked_slots(x_new)) {
      if (j != t && insert_at(j, x_new, f_new)) return true;
    }
    return false;
  }

  bool insert_at(std::size_t t, const Point& x_new, double f_new) {
    const UpdateCoefficients coeffs =
        update_coefficients(factor_, omega_vector(factor_, *set_, x_new), t, x_new);
    const double residual = f_new - evaluate(model_, x_new);
    Snapshot saved = save();
    if (is_degenerate(coeffs)) {
      set_.emplace(replace_point(*set_, t, x_new, f_new));
      if (try_refactor()) return true;
      restore(std::move(saved));
      return false;
    }

    KktFactor updated = apply_inverse_update(factor_, coeffs, t);
    InterpolationSet next = replace_point(*set_, t, x_new, f_new);
    bool stale = false;
    try {
      model_ += solve_update(updated, next, t, x_new, residual).to_model(next.base());
    } catch (const StaleFactorError&) {
      stale = true;
    }
    set_.emplace(std::move(next));
    factor_ = std::move(updated);
    if (stale || !(factor_.scaled_residual() <= std::max(kResidualTolerance, 100.0 * factor_.build_residual))) {
      if (!try_refactor()) {
        restore(std::move(saved));
        return false;
      }
    }
    return true;
  }

  // One model-improvement evaluation; false on geometry failure.
  bool geometry_step() {
    if (!budget_left()) return true;
    const std::size_t t = drop_index();
    GeometryStep step;
    try {
      step = improve_geometry(factor_, *set_, t, x_opt_, delta_, rng_);
    } catch (const GeometryFailure&) {
      try {
        refactor();
        step = improve_geometry(factor_, *set_, t, x_opt_, delta_, rng_);
      } catch (const GeometryFailure&) {
        return false;
      } catch (const NotPoisedError&) {
        return false;
      }
    }
    geometry_failures_ = 0;
    const Point x_new = x_opt_ + step.d;
    const double f_new = evaluate_point(x_new);
    explored_ = true;
    insert(t, x_new, f_new);
    return true;
  }

  void maybe_shift_base() {
    if ((x_opt_ - set_->base()).norm() <= 10.0 * delta_) return;
    Snapshot saved = save();
    model_ = shift_base(model_, x_opt_);
    set_.emplace(set_->with_base(x_opt_));
    if (!try_refactor()) restore(std::move(saved));
  }

  void log_line(double rho, double gnorm) const {
    if (cfg_.log == nullptr) return;
    *cfg_.log << "k=" << result_.iterations << " nf=" << history_.size() << " delta=" << delta_
              << " rho=" << rho << " |g|=" << gnorm << " f=" << f_opt_ << '\n';
  }

  [[nodiscard]] TerminationReason stop_reason() const {
    return gradient(model_, x_opt_).norm() < cfg_.eps_c ? TerminationReason::kGradientRadius
                                                         : TerminationReason::kRadius;
  }

  // A failed geometry step shrinks the region; false after too many in a row.
  bool absorb_geometry_failure() {
    delta_ /= cfg_.gamma;
    return ++geometry_failures_ < kGeometryFailureCap;
  }

  TerminationReason loop() {
    while (true) {
      if (!budget_left()) return TerminationReason::kBudget;
      maybe_shift_base();
      const double gnorm = gradient(model_, x_opt_).norm();

      if (gnorm <= cfg_.eps_c) {
        if (delta_ < cfg_.eps_c) return stop_reason();
        if (!model_accepted() && criticality_attempts_ < kCriticalityCap) {
          ++criticality_attempts_;
          if (criticality_attempts_ == kCriticalityCap) ++result_.criticality_cap_hits;
          if (!geometry_step() && !absorb_geometry_failure()) return TerminationReason::kGeometryFailure;
        } else {
          criticality_attempts_ = 0;
          delta_ *= cfg_.mu;
          explored_ = false;
        }
        log_line(-std::numeric_limits<double>::infinity(), gnorm);
        continue;
      }
      criticality_attempts_ = 0;

      ++result_.iterations;
      const TrialStep step = solve_trsp(model_, x_opt_, delta_);
      const double dnorm = step.d.norm();
      const double q_old = evaluate(model_, x_opt_);
      double rho = -std::numeric_limits<double>::infinity();
      if (step.predicted_reduction > kPredictedReductionGuard * std::max(1.0, std::abs(q_old)) && dnorm > 0.0) {
        const Point x_new = x_opt_ + step.d;
        const double f_old = f_opt_;
        const std::size_t t = set_->size() == 1 ? 0 : drop_index();
        const double f_new = evaluate_point(x_new);
        rho = acceptance_ratio(f_old, f_new, q_old, q_old - step.predicted_reduction);
        insert(t, x_new, f_new);
      }

      if (rho < cfg_.eta_hat1 && !model_accepted()) {
        if (!geometry_step() && !absorb_geometry_failure()) return TerminationReason::kGeometryFailure;
      }
      delta_ = step_radius(delta_, rho, dnorm, cfg_);
      if (rho < cfg_.eta_hat1) explored_ = false;
      log_line(rho, gnorm);
      if (delta_ < cfg_.eps_c && (model_accepted() || delta_ < kRadiusFloor * cfg_.eps_c)) return stop_reason();
    }
  }

  static constexpr std::size_t kCriticalityCap = 10;
  static constexpr std::size_t kGeometryFailureCap = 5;
  // Below eps_c times this the region is too small to repair the geometry.
  static constexpr double kRadiusFloor = 1e-6;

  const Objective& f_;
  TrustRegionConfig cfg_;
  std::size_t n_;
  std::size_t budget_;
  std::mt19937_64 rng_;
  double delta_ = 1.0;
  std::size_t criticality_attempts_ = 0;
  std::size_t geometry_failures_ = 0;
  bool explored_ = false;
  Point x_opt_;
  double f_opt_ = std::numeric_limits<double>::infinity();
  std::vector<double> history_;
  std::optional<InterpolationSet> set_;
  KktFactor factor_;
  QuadraticModel model_;
  SolveResult result_;
};

}  // namespace

SolveResult run_solver(const Objective& f, const Point& x_int, const TrustRegionConfig& cfg) {
  if (!f) throw ContractViolation("run_solver: empty objective");
  Solver solver(f, x_int, cfg);
  return solver.run(x_int);
}

}  // namespace h2dfo
