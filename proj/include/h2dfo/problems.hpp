#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "h2dfo/quadratic.hpp"

namespace h2dfo {

/// A test objective with its standard start point. Calls through operator()
/// are counted per instance; copies get their own counter.
struct ProblemSpec {
  std::string name;
  std::size_t dim = 0;
  Point start;
  Objective evaluator;
  std::optional<double> optimum_hint;
  std::optional<Point> minimizer;

  double operator()(const Point& x) const {
    ++calls_;
    return evaluator(x);
  }
  [[nodiscard]] std::size_t nf() const { return calls_; }
  void reset_count() { calls_ = 0; }

 private:
  mutable std::size_t calls_ = 0;
};

/// (1 - x1)^2 + 100 (x2 - x1^2)^2.
[[nodiscard]] double rosenbrock(const Point& x);

struct ProblemOptions {
  /// Start ROSENBROCK at the origin instead of (-1.2, 1, ...).
  bool origin_start = false;
};

[[nodiscard]] std::vector<std::string> registered_problems();
[[nodiscard]] bool supports_dimension(const std::string& name, std::size_t n);
/// Registered problems defined for dimension n, in registry order.
[[nodiscard]] std::vector<std::string> problems_for_dimension(std::size_t n);

/// Throws UnknownProblemError for an unknown name (the message lists the
/// registry) and ContractViolation for an unsupported dimension.
[[nodiscard]] ProblemSpec get_problem(const std::string& name, std::size_t n, const ProblemOptions& options = {});

}  // namespace h2dfo
