#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "h2dfo/driver.hpp"

namespace h2dfo {

/// Running-best history of one (solver, problem) run.
struct RunRecord {
  std::string solver_id;
  std::string problem_id;
  std::size_t dim = 0;
  std::vector<double> history;
  /// f at the initial point; history.front() unless set otherwise.
  double f_int = 0.0;
  /// Best value over every record of the same problem (see assign_best_values).
  double f_best = 0.0;
};

/// Builds a record from a solve; f_int = f_best = first/last history values.
[[nodiscard]] RunRecord make_record(const std::string& solver_id, const std::string& problem_id, std::size_t dim,
                                    const SolveResult& result);

/// Sets f_best of every record to the minimum over all records with the same
/// (problem_id, dim).
void assign_best_values(std::vector<RunRecord>& records);

struct Accuracy {
  /// Smallest 1-based evaluation count reaching the threshold, if any.
  std::optional<std::size_t> evals;
  /// f_best == f_int: the problem cannot be scored.
  bool excluded = false;

  [[nodiscard]] bool solved() const { return evals.has_value(); }
};

/// Smallest N with (f_int - history[N]) >= (1 - tau_hat)(f_int - f_best).
[[nodiscard]] Accuracy evals_to_accuracy(const RunRecord& record, double tau_hat);

struct ProfileCurve {
  std::vector<double> abscissae;
  std::vector<double> ordinates;
};

/// One curve per solver on a shared abscissa grid.
struct Profiles {
  std::vector<std::string> solvers;
  std::vector<ProfileCurve> curves;
  /// Problems scored (|P|).
  std::size_t problems = 0;
  /// "name/n" of problems dropped because f_best == f_int.
  std::vector<std::string> excluded;
};

/// Step-function value at x (0 left of the first abscissa).
[[nodiscard]] double curve_value(const ProfileCurve& curve, double x);

/// pi_s(alpha) = |{p : N_sp / min_s' N_s'p <= alpha}| / |P|; the grid holds
/// every attained ratio. Throws ContractViolation on duplicate
/// (solver, problem) records or an empty record set.
[[nodiscard]] Profiles perf_profile(std::vector<RunRecord> records, double tau_hat);

/// delta_s(beta) = |{p : N_sp <= beta (n_p + 1), solved}| / |P|.
[[nodiscard]] Profiles data_profile(std::vector<RunRecord> records, double tau_hat);

/// One JSON object per line with fields solver, problem, n, history, f_int.
void write_records(std::ostream& out, const std::vector<RunRecord>& records);
/// Throws std::runtime_error naming the line on malformed input.
[[nodiscard]] std::vector<RunRecord> read_records(std::istream& in);

/// Header "abscissa,<solver>..." then one row per grid point.
void write_profile_csv(std::ostream& out, const Profiles& profiles);
/// gnuplot commands plotting `csv_path` as step curves.
void write_gnuplot_script(std::ostream& out, const Profiles& profiles, const std::string& csv_path,
                          const std::string& xlabel, bool log_x);

struct SolverConfig {
  std::string id;
  TrustRegionConfig config;
  /// m as a function of n; overrides config.m when set.
  std::size_t (*points)(std::size_t n) = nullptr;
};

/// H2 with 2n+1 points, H2 with ceil(n/2)+1 points, Frobenius with 2n+1 points.
[[nodiscard]] std::vector<SolverConfig> compare_solvers(const TrustRegionConfig& base);

/// Runs every solver on every problem at dimension n, concurrently, and
/// returns the records in (problem, solver) order with f_best assigned.
[[nodiscard]] std::vector<RunRecord> run_comparison(const std::vector<std::string>& problems, std::size_t n,
                                                    const std::vector<SolverConfig>& solvers);

}  // namespace h2dfo
