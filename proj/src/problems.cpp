#include "h2dfo/problems.hpp"

#include <cmath>
#include <functional>

#include "h2dfo/errors.hpp"

namespace h2dfo {
namespace {

using Index = Eigen::Index;

double sq(double v) { return v * v; }

double chained_rosenbrock(const Point& x) {
  double f = 0.0;
  for (Index i = 0; i + 1 < x.size(); ++i) f += 100.0 * sq(x[i + 1] - sq(x[i])) + sq(1.0 - x[i]);
  return f;
}

double srosenbr(const Point& x) {
  double f = 0.0;
  for (Index i = 0; i + 1 < x.size(); i += 2) f += 100.0 * sq(x[i + 1] - sq(x[i])) + sq(1.0 - x[i]);
  return f;
}

double woods_block(double a, double b, double c, double d) {
  return 100.0 * sq(b - sq(a)) + sq(1.0 - a) + 90.0 * sq(d - sq(c)) + sq(1.0 - c) + 10.0 * sq(b + d - 2.0) +
         0.1 * sq(b - d);
}

double woods(const Point& x) {
  double f = 0.0;
  for (Index i = 0; i + 3 < x.size(); i += 4) f += woods_block(x[i], x[i + 1], x[i + 2], x[i + 3]);
  return f;
}

double powellsg(const Point& x) {
  double f = 0.0;
  for (Index i = 0; i + 3 < x.size(); i += 4) {
    f += sq(x[i] + 10.0 * x[i + 1]) + 5.0 * sq(x[i + 2] - x[i + 3]) + std::pow(x[i + 1] - 2.0 * x[i + 2], 4) +
         10.0 * std::pow(x[i] - x[i + 3], 4);
  }
  return f;
}

double dqrtic(const Point& x) {
  double f = 0.0;
  for (Index i = 0; i < x.size(); ++i) f += std::pow(x[i] - static_cast<double>(i + 1), 4);
  return f;
}

double vardim(const Point& x) {
  double f = 0.0;
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    f += sq(x[i] - 1.0);
    s += static_cast<double>(i + 1) * (x[i] - 1.0);
  }
  return f + sq(s) + sq(sq(s));
}

double tointgss(const Point& x) {
  const double n = static_cast<double>(x.size());
  double f = 0.0;
  for (Index i = 0; i + 2 < x.size(); ++i) {
    const double t = 0.1 + sq(x[i + 2]);
    f += (10.0 / (n + 2.0) + sq(x[i + 2])) * (2.0 - std::exp(-sq(x[i] - x[i + 1]) / t));
  }
  return f;
}

double sphere(const Point& x) { return x.squaredNorm(); }

double trigonometric(const Point& x) {
  const double n = static_cast<double>(x.size());
  const double cos_sum = x.array().cos().sum();
  double f = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    f += sq(n - cos_sum + static_cast<double>(i + 1) * (1.0 - std::cos(x[i])) - std::sin(x[i]));
  }
  return f;
}

double chainwoo(const Point& x) {
  double f = 1.0;
  for (Index i = 0; i + 3 < x.size(); i += 2) f += woods_block(x[i], x[i + 1], x[i + 2], x[i + 3]);
  return f;
}

double arglina(const Point& x) {
  const double n = static_cast<double>(x.size());
  const double m = 2.0 * n;
  const double s = x.sum();
  double f = 0.0;
  for (Index i = 0; i < x.size(); ++i) f += sq(x[i] - 2.0 / m * s - 1.0);
  f += (m - n) * sq(-2.0 / m * s - 1.0);
  return f;
}

struct Entry {
  const char* name;
  std::function<bool(std::size_t)> supports;
  double (*f)(const Point&);
  std::function<Point(std::size_t)> start;
  std::function<std::optional<Point>(std::size_t)> minimizer;
  std::optional<double> optimum;
};

Point constant(std::size_t n, double v) { return Point::Constant(static_cast<Index>(n), v); }

Point alternating(std::size_t n, double a, double b) {
  Point p(static_cast<Index>(n));
  for (Index i = 0; i < p.size(); ++i) p[i] = i % 2 == 0 ? a : b;
  return p;
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {"ROSENBROCK", [](std::size_t n) { return n >= 2; }, chained_rosenbrock,
       [](std::size_t n) { return alternating(n, -1.2, 1.0); },
       [](std::size_t n) { return std::optional<Point>(constant(n, 1.0)); }, 0.0},
      {"SROSENBR", [](std::size_t n) { return n >= 2 && n % 2 == 0; }, srosenbr,
       [](std::size_t n) { return alternating(n, -1.2, 1.0); },
       [](std::size_t n) { return std::optional<Point>(constant(n, 1.0)); }, 0.0},
      {"WOODS", [](std::size_t n) { return n >= 4 && n % 4 == 0; }, woods,
       [](std::size_t n) { return alternating(n, -3.0, -1.0); },
       [](std::size_t n) { return std::optional<Point>(constant(n, 1.0)); }, 0.0},
      {"POWELLSG", [](std::size_t n) { return n >= 4 && n % 4 == 0; }, powellsg,
       [](std::size_t n) {
         Point p(static_cast<Index>(n));
         const double pattern[4] = {3.0, -1.0, 0.0, 1.0};
         for (Index i = 0; i < p.size(); ++i) p[i] = pattern[i % 4];
         return p;
       },
       [](std::size_t n) { return std::optional<Point>(constant(n, 0.0)); }, 0.0},
      {"DQRTIC", [](std::size_t n) { return n >= 1; }, dqrtic, [](std::size_t n) { return constant(n, 2.0); },
       [](std::size_t n) {
         Point p(static_cast<Index>(n));
         for (Index i = 0; i < p.size(); ++i) p[i] = static_cast<double>(i + 1);
         return std::optional<Point>(p);
       },
       0.0},
      {"VARDIM", [](std::size_t n) { return n >= 1; }, vardim,
       [](std::size_t n) {
         Point p(static_cast<Index>(n));
         for (Index i = 0; i < p.size(); ++i) p[i] = 1.0 - static_cast<double>(i + 1) / static_cast<double>(n);
         return p;
       },
       [](std::size_t n) { return std::optional<Point>(constant(n, 1.0)); }, 0.0},
      {"TOINTGSS", [](std::size_t n) { return n >= 3; }, tointgss, [](std::size_t n) { return constant(n, 3.0); },
       [](std::size_t) { return std::optional<Point>(); }, std::nullopt},
      {"SPHERE", [](std::size_t n) { return n >= 1; }, sphere, [](std::size_t n) { return constant(n, 1.0); },
       [](std::size_t n) { return std::optional<Point>(constant(n, 0.0)); }, 0.0},
      {"TRIGONOMETRIC", [](std::size_t n) { return n >= 1; }, trigonometric,
       [](std::size_t n) { return constant(n, 1.0 / static_cast<double>(n)); },
       [](std::size_t n) { return std::optional<Point>(constant(n, 0.0)); }, 0.0},
      {"CHAINWOO", [](std::size_t n) { return n >= 4 && n % 2 == 0; }, chainwoo,
       [](std::size_t n) { return alternating(n, -3.0, -1.0); },
       [](std::size_t n) { return std::optional<Point>(constant(n, 1.0)); }, 1.0},
      {"ARGLINA", [](std::size_t n) { return n >= 1; }, arglina, [](std::size_t n) { return constant(n, 1.0); },
       [](std::size_t n) { return std::optional<Point>(constant(n, -1.0)); }, std::nullopt},
  };
  return entries;
}

const Entry& lookup(const std::string& name) {
  for (const Entry& e : registry()) {
    if (name == e.name) return e;
  }
  std::string known;
  for (const Entry& e : registry()) known += (known.empty() ? "" : ", ") + std::string(e.name);
  throw UnknownProblemError("unknown problem '" + name + "'; registered: " + known);
}

}  // namespace

double rosenbrock(const Point& x) {
  if (x.size() != 2) throw ContractViolation("rosenbrock: expects a 2-vector");
  return sq(1.0 - x[0]) + 100.0 * sq(x[1] - sq(x[0]));
}

std::vector<std::string> registered_problems() {
  std::vector<std::string> names;
  for (const Entry& e : registry()) names.emplace_back(e.name);
  return names;
}

bool supports_dimension(const std::string& name, std::size_t n) { return lookup(name).supports(n); }

std::vector<std::string> problems_for_dimension(std::size_t n) {
  std::vector<std::string> names;
  for (const Entry& e : registry()) {
    if (e.supports(n)) names.emplace_back(e.name);
  }
  return names;
}

ProblemSpec get_problem(const std::string& name, std::size_t n, const ProblemOptions& options) {
  const Entry& e = lookup(name);
  if (!e.supports(n)) {
    throw ContractViolation("problem " + name + " is not defined for n = " + std::to_string(n));
  }
  ProblemSpec spec;
  spec.name = e.name;
  spec.dim = n;
  spec.start = e.start(n);
  if (options.origin_start && spec.name == "ROSENBROCK") spec.start = constant(n, 0.0);
  spec.evaluator = [f = e.f, n](const Point& x) {
    if (static_cast<std::size_t>(x.size()) != n) throw ContractViolation("objective: dimension mismatch");
    return f(x);
  };
  spec.minimizer = e.minimizer(n);
  spec.optimum_hint = e.optimum;
  if (spec.name == "ARGLINA") spec.optimum_hint = static_cast<double>(n);
  return spec;
}

}  // namespace h2dfo
