#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "h2dfo/errors.hpp"
#include "h2dfo/interpolation_set.hpp"
#include "h2dfo/kkt.hpp"
#include "h2dfo/model_update.hpp"
#include "h2dfo/problems.hpp"
#include "h2dfo/table2.hpp"
#include "oracles.hpp"

using namespace h2dfo;

namespace {

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

double weighted_norm(const QuadraticModel& q, double r, const SobolevWeights& w) {
  return sobolev_norm_sq(q, BallRegion(q.base(), r), w).weighted;
}

InterpolationSet random_set(std::mt19937_64& rng, Eigen::Index n, std::size_t m, const QuadraticModel* f) {
  std::vector<Point> pts;
  std::vector<double> vals;
  for (std::size_t i = 0; i < m; ++i) {
    pts.push_back(oracle::random_in_ball(n, 1.0, rng));
    vals.push_back(f != nullptr ? evaluate(*f, pts.back()) : oracle::random_vector(1, rng)[0]);
  }
  return InterpolationSet(pts, vals, Point::Zero(n));
}

}  // namespace

TEST(SolveUpdate, ZeroResidualGivesZeroChange) {
  std::mt19937_64 rng(41);
  const InterpolationSet s = random_set(rng, 3, 7, nullptr);
  const KktFactor f = assemble_w(s, eta_from_weights({}, 5.0, 3));
  const UpdateSolution u = solve_update(f, s, 2, s.point(2), 0.0);
  EXPECT_EQ(u.lambda.norm(), 0.0);
  EXPECT_EQ(u.c, 0.0);
  EXPECT_EQ(u.g.norm(), 0.0);
  EXPECT_EQ(u.hess.norm(), 0.0);
}

TEST(SolveUpdate, FrobeniusHessianFromMultipliers) {
  std::mt19937_64 rng(42);
  const InterpolationSet s = random_set(rng, 3, 6, nullptr);
  const KktFactor f = assemble_w(s, eta_from_weights(SobolevWeights::frobenius(), 1.0, 3));
  const UpdateSolution u = solve_update(f, s, 4, s.point(4), 0.7);
  Matrix want = Matrix::Zero(3, 3);
  for (std::size_t i = 0; i < 6; ++i) want += 0.25 * u.lambda[static_cast<Eigen::Index>(i)] * s.offset(i) * s.offset(i).transpose();
  EXPECT_LE((u.hess - want).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, want.cwiseAbs().maxCoeff()));
}

TEST(SolveUpdate, LagrangeExampleMatchesDenseSolve) {
  const InterpolationSet s({pt(0, 0), pt(1, 0), pt(0, 1)}, {0, 0, 1}, pt(0, 0));
  for (const SobolevWeights& w : {SobolevWeights{}, SobolevWeights::frobenius()}) {
    const KktFactor f = assemble_w(s, eta_from_weights(w, 10.0, 2));
    const UpdateSolution u = solve_update(f, s, 2, pt(0, 1), 1.0);
    const QuadraticModel d = u.to_model(s.base());
    EXPECT_NEAR(evaluate(d, pt(0, 0)), 0.0, 1e-12);
    EXPECT_NEAR(evaluate(d, pt(1, 0)), 0.0, 1e-12);
    EXPECT_NEAR(evaluate(d, pt(0, 1)), 1.0, 1e-12);
    const Vector z = oracle::least_norm(offsets(s), Vector::Unit(3, 2), 10.0, w.c1, w.c2, w.c3);
    EXPECT_LE((oracle::pack(d.const_term(), d.grad(), d.hess_matrix()) - z).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(SolveUpdate, TraceMatchesHessian) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const InterpolationSet s = random_set(rng, n, static_cast<std::size_t>(n + 3), nullptr);
    const KktFactor f = assemble_w(s, eta_from_weights({}, 4.0, static_cast<std::size_t>(n)));
    const UpdateSolution u = solve_update(f, s, 1, s.point(1), 1.3);
    EXPECT_NEAR(u.trace_t, u.hess.trace(), 1e-10 * std::max(1.0, std::abs(u.trace_t)));
  }
}

TEST(SolveUpdate, RefusesStaleFactor) {
  std::mt19937_64 rng(44);
  const InterpolationSet s = random_set(rng, 2, 5, nullptr);
  KktFactor f = assemble_w(s, eta_from_weights({}, 2.0, 2));
  f.h(0, 0) += 1.0;
  EXPECT_THROW((void)solve_update(f, s, 0, s.point(0), 1.0), StaleFactorError);
}

TEST(BuildInitialModel, FrobeniusConstantData) {
  std::mt19937_64 rng(45);
  std::vector<Point> pts;
  for (int i = 0; i < 7; ++i) pts.push_back(oracle::random_in_ball(3, 1.0, rng));
  const InterpolationSet s(pts, std::vector<double>(7, 4.5), Point::Zero(3));
  const QuadraticModel q = build_initial_model(s, eta_from_weights(SobolevWeights::frobenius(), 1.0, 3));
  EXPECT_NEAR(q.const_term(), 4.5, 1e-12);
  EXPECT_LE(q.grad().norm(), 1e-12);
  EXPECT_LE(q.hess_matrix().norm(), 1e-12);
}

TEST(BuildInitialModel, FirstFrobeniusModelOfTheRosenbrockExample) {
  const QuadraticModel q = table2_model(ModelKind::kFrobenius);
  EXPECT_NEAR(q.const_term(), 1.0, 1e-10);
  EXPECT_NEAR(q.grad()[0], -2.0, 1e-10);
  EXPECT_NEAR(q.grad()[1], -62.0, 1e-10);
  EXPECT_LE((q.hess_matrix() - 76.0 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BuildInitialModel, FirstH2ModelOfTheRosenbrockExample) {
  // The published coefficients are reproduced by the ball radius 2.
  EXPECT_EQ(best_table2_radius(), 2.0);
  const QuadraticModel q = table2_model(ModelKind::kH2, 2.0);
  EXPECT_NEAR(q.grad()[0], -1.8065, 1e-2);
  EXPECT_NEAR(q.grad()[1], -56.0, 1e-2);
  EXPECT_NEAR(q.hess(0, 0), 64.0, 1e-2);
  EXPECT_NEAR(q.hess(1, 0), -0.3871, 1e-2);
  EXPECT_NEAR(q.hess(1, 1), 88.0, 1e-2);
}

TEST(BuildInitialModel, H2ModelMatchesDenseSolveAtEveryRadius) {
  std::vector<double> vals;
  for (const Point& p : unit_circle_points()) vals.push_back(rosenbrock(p));
  const InterpolationSet s(unit_circle_points(), vals, pt(0, 0));
  Vector b(4);
  for (int i = 0; i < 4; ++i) b[i] = vals[static_cast<std::size_t>(i)];
  for (double r : {1.0, 2.0, 5.0, 10.0}) {
    const QuadraticModel q = table2_model(ModelKind::kH2, r);
    const Vector z = oracle::least_norm(offsets(s), b, r, 1.0 / 3, 1.0 / 3, 1.0 / 3);
    const Vector got = oracle::pack(q.const_term(), q.grad(), q.hess_matrix());
    EXPECT_LE((got - z).cwiseAbs().maxCoeff(), 1e-7 * z.cwiseAbs().maxCoeff()) << "r=" << r;
  }
}

TEST(BuildInitialModel, BitwiseDeterministic) {
  std::mt19937_64 rng(46);
  const InterpolationSet s = random_set(rng, 4, 9, nullptr);
  const EtaCoefficients e = eta_from_weights({}, 3.0, 4);
  const QuadraticModel a = build_initial_model(s, e);
  const QuadraticModel b = build_initial_model(s, e);
  EXPECT_EQ(a.const_term(), b.const_term());
  EXPECT_EQ(a.grad(), b.grad());
  EXPECT_EQ(a.hess_packed(), b.hess_packed());
}

TEST(BuildInitialModel, InterpolatesItsData) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 1 + trial % 5;
    const std::size_t m = std::min(static_cast<std::size_t>(n + 1 + trial % 3), InterpolationSet::max_points(static_cast<std::size_t>(n)));
    const InterpolationSet s = random_set(rng, n, m, nullptr);
    const QuadraticModel q = build_initial_model(s, eta_from_weights({}, 2.0, static_cast<std::size_t>(n)));
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_NEAR(evaluate(q, s.point(i)), s.value(i), 1e-8 * std::max(1.0, std::abs(s.value(i))));
    }
  }
}

TEST(ModelUpdate, ProjectionIdentity) {
  std::mt19937_64 rng(48);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const SobolevWeights w{unif(rng), unif(rng), unif(rng)};
    const double r = 1.0 + 4.0 * unif(rng);
    const QuadraticModel f(Point::Zero(n), 0.3, oracle::random_vector(n, rng), oracle::random_symmetric(n, rng));
    const QuadraticModel old(Point::Zero(n), -0.2, oracle::random_vector(n, rng), oracle::random_symmetric(n, rng));
    const InterpolationSet s = random_set(rng, n, static_cast<std::size_t>(2 * n + 1), &f);
    const KktFactor k = assemble_w(s, eta_from_weights(w, r, static_cast<std::size_t>(n)));
    Vector rhs(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = s.value(i) - evaluate(old, s.point(i));
    const QuadraticModel d = solve_rhs(k, s, rhs).to_model(s.base());
    const QuadraticModel next = old + d;
    const double lhs = weighted_norm(next - f, r, w);
    const double rhs_v = weighted_norm(old - f, r, w) - weighted_norm(d, r, w);
    EXPECT_NEAR(lhs, rhs_v, 1e-8 * weighted_norm(old - f, r, w)) << "trial " << trial;
  }
}

TEST(ModelUpdate, FrobeniusHessianErrorNeverGrows) {
  std::mt19937_64 rng(49);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const QuadraticModel f(Point::Zero(n), 0.0, oracle::random_vector(n, rng), oracle::random_symmetric(n, rng));
    const QuadraticModel old(Point::Zero(n));
    const InterpolationSet s = random_set(rng, n, static_cast<std::size_t>(n + 2), &f);
    const QuadraticModel q = build_initial_model(s, eta_from_weights(SobolevWeights::frobenius(), 1.0, static_cast<std::size_t>(n)));
    const double before = (old.hess_matrix() - f.hess_matrix()).squaredNorm();
    const double after = (q.hess_matrix() - f.hess_matrix()).squaredNorm();
    const double change = (q.hess_matrix() - old.hess_matrix()).squaredNorm();
    EXPECT_NEAR(after, before - change, 1e-9 * before);
  }
}

TEST(ModelUpdate, FrobeniusMatchesDenseLeastNormSolve) {
  std::mt19937_64 rng(50);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const InterpolationSet s = random_set(rng, n, static_cast<std::size_t>(n + 1 + trial % (n + 1)), nullptr);
    const QuadraticModel q = build_initial_model(s, eta_from_weights(SobolevWeights::frobenius(), 1.0, static_cast<std::size_t>(n)));
    Vector b(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) b[static_cast<Eigen::Index>(i)] = s.value(i);
    const Vector z = oracle::least_frobenius(offsets(s), b);
    EXPECT_LE((oracle::pack(q.const_term(), q.grad(), q.hess_matrix()) - z).cwiseAbs().maxCoeff(),
              1e-9 * std::max(1.0, z.cwiseAbs().maxCoeff()));
  }
}
