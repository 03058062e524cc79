// Acceptance checks 1-10. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "h2dfo/driver.hpp"
#include "h2dfo/example1.hpp"
#include "h2dfo/interpolation_set.hpp"
#include "h2dfo/kkt.hpp"
#include "h2dfo/model_update.hpp"
#include "h2dfo/problems.hpp"
#include "h2dfo/profiles.hpp"
#include "h2dfo/table2.hpp"
#include "oracles.hpp"

using namespace h2dfo;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Point pt(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

std::vector<Vector> offsets(const InterpolationSet& s) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s.offset(i));
  return out;
}

// Random set of m points in the unit ball whose KKT matrix assembles.
InterpolationSet poised_set(std::mt19937_64& rng, Eigen::Index n, std::size_t m, const EtaCoefficients& eta,
                            const Objective& f) {
  for (;;) {
    std::vector<Point> pts;
    std::vector<double> vals;
    for (std::size_t i = 0; i < m; ++i) {
      pts.push_back(oracle::random_in_ball(n, 1.0, rng));
      vals.push_back(f(pts.back()));
    }
    InterpolationSet s(pts, vals, Point::Zero(n));
    if (invertibility_check(s, eta)) return s;
  }
}

Outcome criterion1() {
  const QuadraticModel q = table2_model(ModelKind::kFrobenius);
  const Table2Reference ref = table2_reference(ModelKind::kFrobenius);
  const double coef = std::max({std::abs(q.const_term() - 1.0), (q.grad() - ref.g).cwiseAbs().maxCoeff(),
                                max_abs(q.hess_matrix() - ref.hess)});
  const Point x = *model_minimizer(q);
  const Point rounded = (x * 1e4).array().round() / 1e4;
  const double xdev = (x - ref.minimizer).cwiseAbs().maxCoeff();
  const double fdev = std::abs(rosenbrock(rounded) - ref.f_min);
  return {coef <= 1e-6 && xdev <= 5e-5 && fdev <= 1e-3,
          "coefficient deviation " + fmt("%.2e", coef) + ", minimizer deviation " + fmt("%.2e", xdev) +
              ", f at the 4-decimal minimizer " + fmt("%.4f", rosenbrock(rounded))};
}

Outcome criterion2() {
  const Table2Reference ref = table2_reference(ModelKind::kH2);
  const double at10 = table2_deviation(table2_model(ModelKind::kH2, 10.0), ref);
  if (at10 <= 1e-2) return {true, "r=10 deviation " + fmt("%.2e", at10)};
  const double r = best_table2_radius();
  const double dev = table2_deviation(table2_model(ModelKind::kH2, r), ref);
  return {dev <= 1e-2, "r=10 deviation " + fmt("%.3g", at10) + "; sweep r=1..10 best r=" + fmt("%g", r) +
                           " deviation " + fmt("%.2e", dev)};
}

Outcome criterion3() {
  const SolveResult h = run_solver(rosenbrock, pt(0, 0), rosenbrock_config(ModelKind::kH2, 4));
  const SolveResult f = run_solver(rosenbrock, pt(0, 0), rosenbrock_config(ModelKind::kFrobenius, 4));
  const std::size_t nh = evaluations_to_reach(h, 1e-8);
  const std::size_t nfro = evaluations_to_reach(f, 1e-8);
  const bool ok = nh > 0 && nh <= 110 && nfro > 0 && nfro <= 134;
  return {ok, "H2 reaches 1e-8 at nf=" + std::to_string(nh) + " (limit 110), Frobenius at nf=" +
                  std::to_string(nfro) + " (limit 134); 0 = never"};
}

Outcome criterion4() {
  bool ok = true;
  std::string detail;
  for (std::size_t m = 1; m <= 6; ++m) {
    const SolveResult r = run_solver(rosenbrock, pt(0, 0), rosenbrock_config(ModelKind::kH2, m));
    const std::size_t hit = evaluations_to_reach(r, 1e-8);
    const std::size_t limit = 3 * rosenbrock_reference_nf(m);
    const bool pass = hit > 0 && hit <= limit;
    ok = ok && pass;
    detail += (m > 1 ? ", " : "") + std::string("m=") + std::to_string(m) + ":" +
              (hit > 0 ? std::to_string(hit) : "unsolved(f=" + fmt("%.2e", r.best_value) + ")") + "/" +
              std::to_string(limit);
  }
  return {ok, detail};
}

Outcome criterion5() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const SobolevWeights w{unif(rng), unif(rng), 0.05 + unif(rng)};
    const double r = 0.5 + 5.0 * unif(rng);
    const QuadraticModel f(Point::Zero(n), oracle::random_vector(1, rng)[0], oracle::random_vector(n, rng),
                           oracle::random_symmetric(n, rng));
    const QuadraticModel old(Point::Zero(n), oracle::random_vector(1, rng)[0], oracle::random_vector(n, rng),
                             oracle::random_symmetric(n, rng));
    const auto m = static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(unif(rng) * static_cast<double>(n + 1));
    const EtaCoefficients eta = eta_from_weights(w, r, static_cast<std::size_t>(n));
    const InterpolationSet s = poised_set(rng, n, m, eta, [&](const Point& x) { return evaluate(f, x); });
    const KktFactor k = assemble_w(s, eta);
    Vector rhs(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) rhs[static_cast<Eigen::Index>(i)] = s.value(i) - evaluate(old, s.point(i));
    const QuadraticModel d = solve_rhs(k, s, rhs).to_model(s.base());
    const BallRegion ball(Point::Zero(n), r);
    const double before = sobolev_norm_sq(old - f, ball, w).weighted;
    const double after = sobolev_norm_sq(old + d - f, ball, w).weighted;
    const double change = sobolev_norm_sq(d, ball, w).weighted;
    worst = std::max(worst, std::abs(after - (before - change)) / before);
  }
  return {worst <= 1e-8, "max relative error " + fmt("%.2e", worst) + " over 200 trials"};
}

Outcome criterion6() {
  std::mt19937_64 rng(6);
  double worst_res = 0.0, worst_dense = 0.0;
  int runs = 0;
  for (Eigen::Index n : {2, 4, 7, 10}) {
    for (const SobolevWeights& w : {SobolevWeights{}, SobolevWeights::frobenius()}) {
      const auto m = static_cast<std::size_t>(2 * n + 1);
      const EtaCoefficients eta = eta_from_weights(w, 2.0, static_cast<std::size_t>(n));
      InterpolationSet s = poised_set(rng, n, m, eta, [](const Point&) { return 0.0; });
      KktFactor f = assemble_w(s, eta);
      std::uniform_int_distribution<std::size_t> pick(0, m - 1);
      for (int done = 0; done < 50;) {
        const std::size_t t = pick(rng);
        const Point x = oracle::random_in_ball(n, 1.0, rng);
        const UpdateCoefficients c = update_coefficients(f, omega_vector(f, s, x), t, x);
        if (is_degenerate(c) || std::abs(c.sigma) < 1e-3 * std::abs(c.alpha * c.beta)) continue;
        f = apply_inverse_update(f, c, t);
        s = replace_point(s, t, x, 0.0);
        const Matrix dense = oracle::dense_w(s, eta).fullPivLu().inverse();
        worst_res = std::max(worst_res, f.residual());
        worst_dense = std::max(worst_dense, max_abs(f.h - dense) / std::max(1.0, max_abs(dense)));
        ++done;
      }
      ++runs;
    }
  }
  return {worst_res <= 1e-8 && worst_dense <= 1e-9,
          std::to_string(runs) + " runs of 50 replacements: max |WH-I| " + fmt("%.2e", worst_res) +
              ", max deviation from dense inverse " + fmt("%.2e", worst_dense)};
}

Outcome criterion7() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  int outside = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + trial % 4;
    const Point center = oracle::random_vector(n, rng);
    const double r = 0.3 + 2.0 * unif(rng);
    const QuadraticModel q(Point::Zero(n), oracle::random_vector(1, rng)[0], oracle::random_vector(n, rng),
                           oracle::random_symmetric(n, rng));
    const QuadraticModel qc = shift_base(q, center);
    const SobolevNorms got = sobolev_norm_sq(qc, BallRegion(center, r), {});
    const oracle::McNorms mc = oracle::monte_carlo_norms(qc.const_term(), qc.grad(), qc.hess_matrix(), r, 1000000, rng);
    const double z0 = std::abs(got.h0_sq - mc.h0.mean) / mc.h0.se;
    const double z1 = std::abs(got.h1_sq - mc.h1.mean) / mc.h1.se;
    const double z2 = std::abs(got.h2_sq - mc.h2.mean) / std::max(1e-300, std::abs(mc.h2.mean));
    worst = std::max({worst, z0, z1});
    outside += (z0 > 3.0) + (z1 > 3.0) + (z2 > 1e-12);
  }
  return {outside == 0, "max |closed form - MC| / SE = " + fmt("%.2f", worst) + ", " + std::to_string(outside) +
                            " of 300 comparisons outside 3 SE"};
}

Outcome criterion8() {
  std::mt19937_64 rng(8);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 6;
    const auto m = static_cast<std::size_t>(n + 1 + trial % (n + 1));
    const EtaCoefficients eta = eta_from_weights(SobolevWeights::frobenius(), 1.0, static_cast<std::size_t>(n));
    std::normal_distribution<double> normal;
    const InterpolationSet s = poised_set(rng, n, m, eta, [&](const Point&) { return normal(rng); });
    const QuadraticModel q = build_initial_model(s, eta);
    Vector b(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) b[static_cast<Eigen::Index>(i)] = s.value(i);
    const Vector z = oracle::least_frobenius(offsets(s), b);
    const Vector got = oracle::pack(q.const_term(), q.grad(), q.hess_matrix());
    worst = std::max(worst, (got - z).cwiseAbs().maxCoeff() / std::max(1.0, z.cwiseAbs().maxCoeff()));
  }
  return {worst <= 1e-9, "max deviation from the dense solve " + fmt("%.2e", worst)};
}

Outcome criterion9() {
  const std::vector<Example1Row> rows = example1_experiment();
  const Example1Row* h = nullptr;
  const Example1Row* f = nullptr;
  for (const Example1Row& r : rows) {
    if (r.kind == ModelKind::kH2) h = &r;
    if (r.kind == ModelKind::kFrobenius) f = &r;
  }
  return {h->grid_mean <= f->grid_mean, "final grid mean error H2 " + fmt("%.4f", h->grid_mean) + ", Frobenius " +
                                            fmt("%.4f", f->grid_mean)};
}

Outcome criterion10() {
  const std::size_t n = 10;
  const std::vector<std::string> problems = problems_for_dimension(n);
  const std::vector<RunRecord> records = run_comparison(problems, n, compare_solvers({}));
  const Profiles perf = perf_profile(records, 1e-3);
  const Profiles data = data_profile(records, 1e-3);
  bool shape = true;
  for (const Profiles* p : {&perf, &data}) {
    for (const ProfileCurve& c : p->curves) {
      for (std::size_t i = 0; i < c.ordinates.size(); ++i) {
        shape = shape && c.ordinates[i] >= 0.0 && c.ordinates[i] <= 1.0;
        if (i > 0) shape = shape && c.ordinates[i] >= c.ordinates[i - 1];
      }
    }
  }
  double top = 0.0;
  std::string detail = std::to_string(problems.size()) + " problems, " + std::to_string(perf.problems) + " scored; pi(1):";
  for (std::size_t s = 0; s < perf.solvers.size(); ++s) {
    const double v = curve_value(perf.curves[s], 1.0);
    top = std::max(top, v);
    detail += " " + perf.solvers[s] + "=" + fmt("%.3f", v);
  }
  return {problems.size() >= 8 && shape && top > 0.0, detail};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> checks = {criterion1, criterion2, criterion3, criterion4,
                                                        criterion5, criterion6, criterion7, criterion8,
                                                        criterion9, criterion10};
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = checks[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << o.detail << " ["
              << fmt("%.1f", secs) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
