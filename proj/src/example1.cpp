#include "h2dfo/example1.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "h2dfo/errors.hpp"
#include "h2dfo/interpolation_set.hpp"
#include "h2dfo/kkt.hpp"
#include "h2dfo/model_update.hpp"
#include "h2dfo/subproblems.hpp"

namespace h2dfo {

namespace {

Point pt(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

struct Errors {
  double max = 0.0;
  double mean = 0.0;
};

// |[y = spike] - q(y)| over the given points.
Errors errors_at(const std::vector<Point>& ys, const QuadraticModel& q, const Point& spike) {
  Errors e;
  for (const Point& y : ys) {
    const double hit = same_point(y, spike) ? 1.0 : 0.0;
    const double v = std::abs(hit - evaluate(q, y));
    e.max = std::max(e.max, v);
    e.mean += v;
  }
  if (!ys.empty()) e.mean /= static_cast<double>(ys.size());
  return e;
}

std::vector<Point> grid(const Example1Options& o) {
  std::vector<Point> ys;
  for (int p = -o.grid_half; p <= o.grid_half; ++p) {
    for (int q = -o.grid_half; q <= o.grid_half; ++q) ys.push_back(pt(p * o.grid_step, q * o.grid_step));
  }
  return ys;
}

Point next_point(const QuadraticModel& model, const InterpolationSet& set, double delta) {
  const Point& center = set.best_point();
  const TrialStep step = solve_trsp(model, center, delta);
  Point x = center + step.d;
  if (step.d.norm() > 1e-12 && set.find(x, set.size()) == set.size()) return x;
  for (const Point& d : {pt(1, 0), pt(0, 1), pt(-1, 0), pt(0, -1)}) {
    x = center + delta * d;
    if (set.find(x, set.size()) == set.size()) return x;
  }
  return x;
}

void run_kind(ModelKind kind, const Example1Options& o, const std::vector<Point>& ys,
              std::vector<Example1Row>& rows) {
  const SobolevWeights w = kind == ModelKind::kFrobenius ? SobolevWeights::frobenius() : o.weights;
  const Point base = pt(0.0, 0.0);
  InterpolationSet set({pt(0, 0), pt(1, 0), pt(0, 1)}, {1.0, 0.0, 0.0}, base);
  std::vector<Point> visited = set.points();
  QuadraticModel model(base);

  Example1Row first;
  first.kind = kind;
  first.model = model;
  first.change = model;
  // Before any update f is the indicator of the origin.
  const Errors ei = errors_at(visited, model, base);
  const Errors eg = errors_at(ys, model, base);
  first.itr_max = ei.max;
  first.itr_mean = ei.mean;
  first.grid_max = eg.max;
  first.grid_mean = eg.mean;
  rows.push_back(first);

  for (std::size_t k = 1; k <= o.iterations; ++k) {
    const Point x_new = next_point(model, set, o.delta);
    // Farthest point from the best one whose replacement keeps the set
    // affinely independent (the Frobenius system solvable) and W invertible.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (i != set.best_index()) order.push_back(i);
    }
    const Point center = set.best_point();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return (set.point(a) - center).norm() > (set.point(b) - center).norm();
    });
    const double f_new = evaluate(model, x_new) + 1.0;
    std::optional<InterpolationSet> next;
    std::optional<KktFactor> factor;
    std::size_t t = order.front();
    double r = 0.0;
    for (std::size_t j : order) {
      InterpolationSet cand = replace_point(set, j, x_new, f_new);
      double far = 0.0;
      for (const Point& p : cand.points()) far = std::max(far, (p - cand.best_point()).norm());
      r = std::max(10.0 * o.delta, far);
      try {
        if (kind == ModelKind::kH2) (void)assemble_w(cand, eta_from_weights(SobolevWeights::frobenius(), r, 2));
        factor = assemble_w(cand, eta_from_weights(w, r, 2));
      } catch (const NotPoisedError&) {
        continue;
      }
      t = j;
      next = std::move(cand);
      break;
    }
    if (!next) throw NotPoisedError("example 1: no replacement keeps the set poised");
    const Point dropped = set.point(t);
    set = std::move(*next);
    const QuadraticModel change = solve_update(*factor, set, t, x_new, 1.0).to_model(base);
    model += change;
    visited.push_back(x_new);

    Example1Row row;
    row.kind = kind;
    row.iteration = k;
    row.x_new = x_new;
    row.dropped = dropped;
    row.r = r;
    row.model = model;
    row.change = change;
    const Errors a = errors_at(visited, change, x_new);
    const Errors b = errors_at(ys, change, x_new);
    row.itr_max = a.max;
    row.itr_mean = a.mean;
    row.grid_max = b.max;
    row.grid_mean = b.mean;
    rows.push_back(row);
  }
}

}  // namespace

std::vector<Example1Row> example1_experiment(const Example1Options& options) {
  const std::vector<Point> ys = grid(options);
  std::vector<Example1Row> rows;
  run_kind(ModelKind::kH2, options, ys, rows);
  run_kind(ModelKind::kFrobenius, options, ys, rows);
  return rows;
}

void print_example1(std::ostream& out, const std::vector<Example1Row>& rows) {
  out << std::left << std::setw(11) << "model" << std::setw(6) << "iter" << std::setw(20) << "x_new"
      << std::setw(14) << "itr_max" << std::setw(14) << "itr_mean" << std::setw(14) << "grid_max"
      << "grid_mean" << '\n';
  for (const Example1Row& r : rows) {
    std::ostringstream xs;
    if (r.iteration == 0) {
      xs << '-';
    } else {
      xs << std::fixed << std::setprecision(4) << '(' << r.x_new[0] << ", " << r.x_new[1] << ')';
    }
    out << std::left << std::setw(11) << to_string(r.kind) << std::setw(6) << r.iteration << std::setw(20)
        << xs.str() << std::scientific << std::setprecision(4) << std::setw(14) << r.itr_max << std::setw(14)
        << r.itr_mean << std::setw(14) << r.grid_max << r.grid_mean << std::defaultfloat << '\n';
  }
}

}  // namespace h2dfo
