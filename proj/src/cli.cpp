#include "h2dfo/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "h2dfo/driver.hpp"
#include "h2dfo/errors.hpp"
#include "h2dfo/example1.hpp"
#include "h2dfo/problems.hpp"
#include "h2dfo/profiles.hpp"
#include "h2dfo/table2.hpp"

namespace h2dfo {

namespace {

struct Flags {
  std::string problem = "ROSENBROCK";
  std::vector<std::string> problems;
  std::size_t n = 2;
  std::string model = "h2";
  std::size_t m = 0;
  std::vector<double> weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  double delta0 = 1.0;
  double gamma = 2.0;
  double eps = 1e-8;
  std::size_t max_nf = 0;
  std::uint64_t seed = 0;
  std::string out;
  double tau = 1e-3;
  std::vector<std::string> records;
  std::string data_out;
  std::string plot;
  bool origin_start = false;
  bool verbose = false;
  double r = 10.0;
};

void add_solver_flags(CLI::App* app, Flags& f) {
  app->add_option("--weights", f.weights, "C1,C2,C3")->delimiter(',')->expected(3);
  app->add_option("--delta0", f.delta0, "initial trust-region radius")->check(CLI::PositiveNumber);
  app->add_option("--gamma", f.gamma, "radius factor (> 1)");
  app->add_option("--eps", f.eps, "radius and model-gradient tolerance")->check(CLI::PositiveNumber);
  app->add_option("--max-nf", f.max_nf, "evaluation budget (0: 200(n+1))");
  app->add_option("--seed", f.seed, "seed of the geometry-step directions");
}

TrustRegionConfig solver_config(const Flags& f) {
  TrustRegionConfig cfg;
  cfg.delta0 = f.delta0;
  cfg.gamma = f.gamma;
  cfg.eps_c = f.eps;
  cfg.max_nf = f.max_nf;
  cfg.seed = f.seed;
  cfg.weights = {f.weights[0], f.weights[1], f.weights[2]};
  return cfg;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream s(path);
  if (!s) throw std::runtime_error("cannot write " + path);
  return s;
}

int run_solve(const Flags& f, std::ostream& out) {
  TrustRegionConfig cfg = solver_config(f);
  cfg.model_kind = parse_model_kind(f.model);
  cfg.m = f.m;
  ProblemOptions opts;
  opts.origin_start = f.origin_start;
  ProblemSpec spec = get_problem(f.problem, f.n, opts);
  cfg.validate(f.n);
  if (f.verbose) cfg.log = &std::cerr;
  std::ofstream file;
  if (!f.out.empty()) file = open_out(f.out);
  const SolveResult res = run_solver([&spec](const Point& x) { return spec(x); }, spec.start, cfg);
  const std::string id = to_string(cfg.model_kind) + "-m" + std::to_string(cfg.points_for(f.n));
  if (file.is_open()) write_records(file, {make_record(id, spec.name, f.n, res)});
  out << std::setprecision(10) << "problem " << spec.name << " n=" << f.n << " model=" << to_string(cfg.model_kind)
      << " m=" << cfg.points_for(f.n) << '\n'
      << "best f " << res.best_value << " after nf=" << res.nf << " (" << to_string(res.termination_reason)
      << ")\n"
      << "best x";
  for (Eigen::Index i = 0; i < res.best_point.size(); ++i) out << ' ' << res.best_point[i];
  out << '\n';
  return 0;
}

int run_compare(const Flags& f, std::ostream& out) {
  std::vector<std::string> names = f.problems.empty() ? problems_for_dimension(f.n) : f.problems;
  for (const std::string& p : names) {
    if (!supports_dimension(p, f.n)) throw ContractViolation(p + " is not defined for n=" + std::to_string(f.n));
  }
  const std::vector<SolverConfig> solvers = compare_solvers(solver_config(f));
  for (const SolverConfig& s : solvers) {
    TrustRegionConfig c = s.config;
    c.m = s.points(f.n);
    c.validate(f.n);
  }
  std::ofstream file;
  if (!f.out.empty()) file = open_out(f.out);
  const std::vector<RunRecord> records = run_comparison(names, f.n, solvers);
  if (file.is_open()) write_records(file, records);
  out << std::left << std::setw(14) << "problem" << std::setw(16) << "solver" << std::setw(8) << "nf"
      << "best f\n";
  for (const RunRecord& r : records) {
    out << std::setw(14) << r.problem_id << std::setw(16) << r.solver_id << std::setw(8) << r.history.size()
        << std::setprecision(6) << r.history.back() << '\n';
  }
  return 0;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

int run_profile(const Flags& f, std::ostream& out, std::ostream& err) {
  if (f.records.empty()) throw std::invalid_argument("--records is required");
  std::vector<RunRecord> records;
  for (const std::string& path : f.records) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::vector<RunRecord> part = read_records(in);
    records.insert(records.end(), part.begin(), part.end());
  }
  const Profiles perf = perf_profile(records, f.tau);
  const Profiles data = data_profile(records, f.tau);
  for (const std::string& p : perf.excluded) err << "warning: " << p << " excluded (no decrease from f_int)\n";
  const std::string perf_path = f.out.empty() ? "perf_profile.csv" : f.out;
  const std::string data_path = f.data_out.empty() ? with_suffix(perf_path, "_data") : f.data_out;
  {
    std::ofstream s = open_out(perf_path);
    write_profile_csv(s, perf);
  }
  {
    std::ofstream s = open_out(data_path);
    write_profile_csv(s, data);
  }
  if (!f.plot.empty()) {
    std::ofstream s = open_out(f.plot);
    s << "set terminal pngcairo size 800,600\n"
      << "set output '" << with_suffix(f.plot, "_perf") << ".png'\n";
    write_gnuplot_script(s, perf, perf_path, "performance ratio", true);
    s << "set output '" << with_suffix(f.plot, "_data") << ".png'\n";
    write_gnuplot_script(s, data, data_path, "simplex gradients (nf / (n+1))", false);
  }
  out << "problems scored " << perf.problems << ", solvers " << perf.solvers.size() << '\n';
  for (std::size_t s = 0; s < perf.solvers.size(); ++s) {
    out << "  " << std::left << std::setw(16) << perf.solvers[s] << "pi(1)=" << curve_value(perf.curves[s], 1.0)
        << " solved=" << perf.curves[s].ordinates.back() << '\n';
  }
  out << "wrote " << perf_path << " and " << data_path << '\n';
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Derivative-free trust-region solver with least H2-norm updating quadratic models"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* solve = app.add_subcommand("solve", "run one solver configuration on one problem");
  solve->add_option("--problem", f.problem, "registered problem name");
  solve->add_option("--n", f.n, "dimension")->check(CLI::PositiveNumber);
  solve->add_option("--model", f.model, "h2 or frobenius")->check(CLI::IsMember({"h2", "frobenius"}));
  solve->add_option("--m", f.m, "interpolation points (0: 2n+1)");
  solve->add_option("--out", f.out, "JSON-lines file for the run record");
  solve->add_flag("--origin-start", f.origin_start, "start ROSENBROCK at the origin");
  solve->add_flag("--verbose", f.verbose, "iteration log on stderr");
  add_solver_flags(solve, f);

  CLI::App* compare = app.add_subcommand("compare", "run the three standard configurations on a problem list");
  compare->add_option("--problem", f.problems, "problem names (default: every problem defined for n)")
      ->delimiter(',');
  compare->add_option("--n", f.n, "dimension")->check(CLI::PositiveNumber);
  compare->add_option("--out", f.out, "JSON-lines file for the run records");
  add_solver_flags(compare, f);

  CLI::App* profile = app.add_subcommand("profile", "performance and data profiles from run records");
  profile->add_option("--records", f.records, "JSON-lines record files")->delimiter(',');
  profile->add_option("--tau", f.tau, "accuracy level tau in (0, 1)");
  profile->add_option("--out", f.out, "performance profile CSV");
  profile->add_option("--data-out", f.data_out, "data profile CSV (default: <out>_data.csv)");
  profile->add_option("--plot", f.plot, "gnuplot script to write");

  CLI::App* table2 = app.add_subcommand("repro-table2", "first models of the Rosenbrock example");
  table2->add_option("--r", f.r, "ball radius of the H2 model")->check(CLI::PositiveNumber);
  CLI::App* example1 = app.add_subcommand("repro-example1", "interpolation errors of the Lagrange example");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (f.weights.size() != 3) throw std::invalid_argument("--weights needs three values");
    if (solve->parsed()) return run_solve(f, out);
    if (compare->parsed()) return run_compare(f, out);
    if (profile->parsed()) return run_profile(f, out, err);
    if (table2->parsed()) {
      print_table2(out, f.r);
      return 0;
    }
    if (example1->parsed()) {
      print_example1(out, example1_experiment());
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return dispatch(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace h2dfo
