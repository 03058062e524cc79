#include "h2dfo/table2.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "h2dfo/errors.hpp"
#include "h2dfo/interpolation_set.hpp"
#include "h2dfo/kkt.hpp"
#include "h2dfo/model_update.hpp"
#include "h2dfo/problems.hpp"

namespace h2dfo {

namespace {

Point pt(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

}  // namespace

std::vector<Point> unit_circle_points() {
  const double s = std::sqrt(3.0) / 2.0;
  return {pt(0.0, 0.0), pt(s, 0.5), pt(-s, 0.5), pt(0.0, -1.0)};
}

std::vector<Point> rosenbrock_start_points(std::size_t m) {
  const double h = std::sqrt(0.5);
  switch (m) {
    case 1: return {pt(0, 0)};
    case 2: return {pt(0, 0), pt(1, 0)};
    case 3: return {pt(0, 0), pt(1, 0), pt(0, 1)};
    case 4: return unit_circle_points();
    case 5: return {pt(0, 0), pt(1, 0), pt(0, 1), pt(-1, 0), pt(0, -1)};
    case 6: return {pt(0, 0), pt(1, 0), pt(0, 1), pt(-1, 0), pt(0, -1), pt(h, -h)};
    default: throw ContractViolation("rosenbrock_start_points: m must lie in 1..6");
  }
}

std::size_t rosenbrock_reference_nf(std::size_t m) {
  static constexpr std::size_t nf[] = {56, 58, 60, 55, 61, 63};
  if (m < 1 || m > 6) throw ContractViolation("rosenbrock_reference_nf: m must lie in 1..6");
  return nf[m - 1];
}

TrustRegionConfig rosenbrock_config(ModelKind kind, std::size_t m) {
  TrustRegionConfig cfg;
  cfg.model_kind = kind;
  cfg.m = m;
  cfg.initial_points = rosenbrock_start_points(m);
  cfg.max_nf = 2000;
  return cfg;
}

std::size_t evaluations_to_reach(const SolveResult& result, double target) {
  for (std::size_t i = 0; i < result.history.size(); ++i) {
    if (result.history[i] <= target) return i + 1;
  }
  return 0;
}

QuadraticModel table2_model(ModelKind kind, double r, const SobolevWeights& weights) {
  std::vector<Point> pts = unit_circle_points();
  std::vector<double> vals;
  for (const Point& p : pts) vals.push_back(rosenbrock(p));
  const InterpolationSet set(pts, vals, pt(0.0, 0.0));
  const SobolevWeights w = kind == ModelKind::kFrobenius ? SobolevWeights::frobenius() : weights;
  return build_initial_model(set, eta_from_weights(w, r, 2));
}

std::optional<Point> model_minimizer(const QuadraticModel& model) {
  const Matrix h = model.hess_matrix();
  Eigen::LLT<Matrix> llt(h);
  if (llt.info() != Eigen::Success) return std::nullopt;
  return Point(model.base() - llt.solve(model.grad()));
}

Table2Reference table2_reference(ModelKind kind) {
  Table2Reference ref;
  ref.g = Vector(2);
  ref.hess = Matrix(2, 2);
  if (kind == ModelKind::kFrobenius) {
    ref.g << -2.0, -62.0;
    ref.hess << 76.0, 0.0, 0.0, 76.0;
    ref.minimizer = pt(0.0263, 0.8158);
    ref.f_min = 67.3882;
  } else {
    ref.g << -1.8065, -56.0;
    ref.hess << 64.0, -0.3871, -0.3871, 88.0;
    ref.minimizer = pt(0.0321, 0.6365);
    ref.f_min = 41.3190;
  }
  return ref;
}

double table2_deviation(const QuadraticModel& model, const Table2Reference& ref) {
  double dev = (model.grad() - ref.g).cwiseAbs().maxCoeff();
  dev = std::max(dev, (model.hess_matrix() - ref.hess).cwiseAbs().maxCoeff());
  const std::optional<Point> x = model_minimizer(model);
  if (!x) return std::numeric_limits<double>::infinity();
  dev = std::max(dev, (*x - ref.minimizer).cwiseAbs().maxCoeff());
  return std::max(dev, std::abs(rosenbrock(*x) - ref.f_min));
}

double best_table2_radius(const SobolevWeights& weights) {
  const Table2Reference ref = table2_reference(ModelKind::kH2);
  double best_r = 10.0;
  double best = std::numeric_limits<double>::infinity();
  for (int r = 1; r <= 10; ++r) {
    const double dev = table2_deviation(table2_model(ModelKind::kH2, r, weights), ref);
    if (dev < best) {
      best = dev;
      best_r = r;
    }
  }
  return best_r;
}

namespace {

void row(std::ostream& out, const char* label, const std::string& ref, const std::string& got) {
  out << "  " << std::left << std::setw(8) << label << std::setw(42) << ref << got << '\n';
}

std::string vec2(const Vector& v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << '(' << v[0] << ", " << v[1] << ')';
  return s.str();
}

std::string mat2(const Matrix& m) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << "[[" << m(0, 0) << ", " << m(0, 1) << "], [" << m(1, 0) << ", "
    << m(1, 1) << "]]";
  return s.str();
}

std::string num(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << v;
  return s.str();
}

void block(std::ostream& out, const std::string& title, const QuadraticModel& model, const Table2Reference& ref) {
  out << title << '\n';
  row(out, "", "reference", "computed");
  row(out, "c", "1", num(model.const_term()));
  row(out, "g", vec2(ref.g), vec2(model.grad()));
  row(out, "G", mat2(ref.hess), mat2(model.hess_matrix()));
  const std::optional<Point> x = model_minimizer(model);
  row(out, "x_opt", vec2(ref.minimizer), x ? vec2(*x) : "indefinite");
  row(out, "f(x_opt)", num(ref.f_min), x ? num(rosenbrock(*x)) : "-");
}

}  // namespace

void print_table2(std::ostream& out, double r) {
  block(out, "Frobenius model", table2_model(ModelKind::kFrobenius), table2_reference(ModelKind::kFrobenius));
  const Table2Reference ref = table2_reference(ModelKind::kH2);
  block(out, "H2 model, r = " + num(r), table2_model(ModelKind::kH2, r), ref);
  const double rb = best_table2_radius();
  if (rb != r) block(out, "H2 model, closest r in 1..10: r = " + num(rb), table2_model(ModelKind::kH2, rb), ref);
}

}  // namespace h2dfo
