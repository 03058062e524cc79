#include "h2dfo/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "h2dfo/errors.hpp"
#include "h2dfo/problems.hpp"

namespace h2dfo {

RunRecord make_record(const std::string& solver_id, const std::string& problem_id, std::size_t dim,
                      const SolveResult& result) {
  RunRecord r;
  r.solver_id = solver_id;
  r.problem_id = problem_id;
  r.dim = dim;
  r.history = result.history;
  r.f_int = r.history.empty() ? 0.0 : r.history.front();
  r.f_best = r.history.empty() ? 0.0 : r.history.back();
  return r;
}

namespace {

std::string problem_key(const RunRecord& r) { return r.problem_id + "/" + std::to_string(r.dim); }

double history_min(const RunRecord& r) {
  double best = std::numeric_limits<double>::infinity();
  for (double v : r.history) best = std::min(best, v);
  return best;
}

}  // namespace

void assign_best_values(std::vector<RunRecord>& records) {
  std::map<std::string, double> best;
  for (const RunRecord& r : records) {
    const auto [it, fresh] = best.emplace(problem_key(r), history_min(r));
    if (!fresh) it->second = std::min(it->second, history_min(r));
  }
  for (RunRecord& r : records) r.f_best = best[problem_key(r)];
}

Accuracy evals_to_accuracy(const RunRecord& record, double tau_hat) {
  Accuracy acc;
  const double span = record.f_int - record.f_best;
  if (!(span > 0.0) || !std::isfinite(span)) {
    acc.excluded = true;
    return acc;
  }
  const double need = (1.0 - tau_hat) * span;
  for (std::size_t i = 0; i < record.history.size(); ++i) {
    if (record.f_int - record.history[i] >= need) {
      acc.evals = i + 1;
      break;
    }
  }
  return acc;
}

double curve_value(const ProfileCurve& curve, double x) {
  double v = 0.0;
  for (std::size_t i = 0; i < curve.abscissae.size() && curve.abscissae[i] <= x; ++i) v = curve.ordinates[i];
  return v;
}

namespace {

// N_sp for every scored problem; nullopt marks unsolved.
struct Table {
  std::vector<std::string> solvers;
  std::vector<std::string> problems;
  std::vector<std::size_t> dims;
  std::vector<std::vector<std::optional<std::size_t>>> evals;  // [problem][solver]
  std::vector<std::string> excluded;
};

Table tabulate(std::vector<RunRecord> records, double tau_hat) {
  if (records.empty()) throw ContractViolation("profile: no records");
  if (!(tau_hat > 0.0 && tau_hat < 1.0)) throw ContractViolation("profile: tau must lie in (0, 1)");
  assign_best_values(records);
  Table t;
  std::map<std::string, std::size_t> solver_index;
  std::map<std::string, std::size_t> problem_index;
  std::vector<std::string> keys;
  for (const RunRecord& r : records) {
    if (solver_index.emplace(r.solver_id, t.solvers.size()).second) t.solvers.push_back(r.solver_id);
    if (problem_index.emplace(problem_key(r), keys.size()).second) keys.push_back(problem_key(r));
  }
  std::vector<std::vector<std::optional<std::size_t>>> evals(keys.size(),
                                                             std::vector<std::optional<std::size_t>>(t.solvers.size()));
  std::vector<bool> seen(keys.size() * t.solvers.size(), false);
  std::vector<bool> excluded(keys.size(), false);
  std::vector<std::size_t> dims(keys.size(), 0);
  for (const RunRecord& r : records) {
    const std::size_t p = problem_index[problem_key(r)];
    const std::size_t s = solver_index[r.solver_id];
    if (seen[p * t.solvers.size() + s]) {
      throw ContractViolation("profile: more than one record for " + r.solver_id + " on " + problem_key(r));
    }
    seen[p * t.solvers.size() + s] = true;
    dims[p] = r.dim;
    const Accuracy acc = evals_to_accuracy(r, tau_hat);
    if (acc.excluded) excluded[p] = true;
    evals[p][s] = acc.evals;
  }
  for (std::size_t p = 0; p < keys.size(); ++p) {
    if (excluded[p]) {
      t.excluded.push_back(keys[p]);
      continue;
    }
    t.problems.push_back(keys[p]);
    t.dims.push_back(dims[p]);
    t.evals.push_back(evals[p]);
  }
  return t;
}

Profiles from_scores(const Table& t, const std::vector<std::vector<double>>& scores, double origin) {
  // scores[problem][solver]: +inf when unsolved.
  std::set<double> grid{origin};
  for (const auto& row : scores) {
    for (double v : row) {
      if (std::isfinite(v)) grid.insert(v);
    }
  }
  Profiles out;
  out.solvers = t.solvers;
  out.problems = t.problems.size();
  out.excluded = t.excluded;
  const double np = static_cast<double>(t.problems.size());
  for (std::size_t s = 0; s < t.solvers.size(); ++s) {
    ProfileCurve c;
    for (double x : grid) {
      std::size_t count = 0;
      for (const auto& row : scores) count += row[s] <= x ? 1 : 0;
      c.abscissae.push_back(x);
      c.ordinates.push_back(np > 0.0 ? static_cast<double>(count) / np : 0.0);
    }
    out.curves.push_back(std::move(c));
  }
  return out;
}

}  // namespace

Profiles perf_profile(std::vector<RunRecord> records, double tau_hat) {
  const Table t = tabulate(std::move(records), tau_hat);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> ratios;
  for (const auto& row : t.evals) {
    std::optional<std::size_t> fastest;
    for (const auto& e : row) {
      if (e && (!fastest || *e < *fastest)) fastest = e;
    }
    std::vector<double> r(row.size(), inf);
    for (std::size_t s = 0; s < row.size(); ++s) {
      if (row[s]) r[s] = static_cast<double>(*row[s]) / static_cast<double>(*fastest);
    }
    ratios.push_back(std::move(r));
  }
  return from_scores(t, ratios, 1.0);
}

Profiles data_profile(std::vector<RunRecord> records, double tau_hat) {
  const Table t = tabulate(std::move(records), tau_hat);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> budgets;
  for (std::size_t p = 0; p < t.evals.size(); ++p) {
    std::vector<double> b(t.evals[p].size(), inf);
    for (std::size_t s = 0; s < b.size(); ++s) {
      if (t.evals[p][s]) b[s] = static_cast<double>(*t.evals[p][s]) / static_cast<double>(t.dims[p] + 1);
    }
    budgets.push_back(std::move(b));
  }
  return from_scores(t, budgets, 0.0);
}

void write_records(std::ostream& out, const std::vector<RunRecord>& records) {
  for (const RunRecord& r : records) {
    nlohmann::json j;
    j["solver"] = r.solver_id;
    j["problem"] = r.problem_id;
    j["n"] = r.dim;
    j["f_int"] = r.f_int;
    j["history"] = r.history;
    out << j.dump() << '\n';
  }
}

namespace {

double as_real(const nlohmann::json& v) {
  // Non-finite values are written as null.
  return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
}

}  // namespace

std::vector<RunRecord> read_records(std::istream& in) {
  std::vector<RunRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      RunRecord r;
      r.solver_id = j.at("solver").get<std::string>();
      r.problem_id = j.at("problem").get<std::string>();
      r.dim = j.at("n").get<std::size_t>();
      for (const auto& v : j.at("history")) r.history.push_back(as_real(v));
      if (r.history.empty()) throw std::runtime_error("empty history");
      r.f_int = j.contains("f_int") ? as_real(j["f_int"]) : r.history.front();
      r.f_best = history_min(r);
      records.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error("record line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

void write_profile_csv(std::ostream& out, const Profiles& profiles) {
  out << "abscissa";
  for (const std::string& s : profiles.solvers) out << ',' << s;
  out << '\n';
  if (profiles.curves.empty()) return;
  const std::vector<double>& xs = profiles.curves.front().abscissae;
  out << std::setprecision(10);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << xs[i];
    for (const ProfileCurve& c : profiles.curves) out << ',' << c.ordinates[i];
    out << '\n';
  }
}

void write_gnuplot_script(std::ostream& out, const Profiles& profiles, const std::string& csv_path,
                          const std::string& xlabel, bool log_x) {
  out << "set datafile separator ','\n"
      << "set key bottom right\n"
      << "set yrange [0:1.05]\n"
      << "set xlabel '" << xlabel << "'\n"
      << "set ylabel 'fraction of problems'\n";
  if (log_x) out << "set logscale x 2\n";
  out << "plot ";
  for (std::size_t s = 0; s < profiles.solvers.size(); ++s) {
    if (s > 0) out << ", \\\n     ";
    out << "'" << csv_path << "' using 1:" << s + 2 << " with steps title '" << profiles.solvers[s] << "'";
  }
  out << '\n';
}

std::vector<SolverConfig> compare_solvers(const TrustRegionConfig& base) {
  std::vector<SolverConfig> out(3);
  out[0].id = "h2-2n+1";
  out[0].config = base;
  out[0].config.model_kind = ModelKind::kH2;
  out[0].points = [](std::size_t n) { return 2 * n + 1; };
  out[1].id = "h2-half";
  out[1].config = base;
  out[1].config.model_kind = ModelKind::kH2;
  out[1].points = [](std::size_t n) { return (n + 1) / 2 + 1; };
  out[2].id = "frobenius-2n+1";
  out[2].config = base;
  out[2].config.model_kind = ModelKind::kFrobenius;
  out[2].points = [](std::size_t n) { return 2 * n + 1; };
  return out;
}

std::vector<RunRecord> run_comparison(const std::vector<std::string>& problems, std::size_t n,
                                      const std::vector<SolverConfig>& solvers) {
  std::vector<std::future<RunRecord>> jobs;
  for (const std::string& name : problems) {
    for (const SolverConfig& s : solvers) {
      ProblemSpec spec = get_problem(name, n);
      TrustRegionConfig cfg = s.config;
      if (s.points != nullptr) cfg.m = s.points(n);
      cfg.initial_points.clear();
      cfg.log = nullptr;
      cfg.validate(n);
      jobs.push_back(std::async(std::launch::async, [spec = std::move(spec), cfg, id = s.id, n]() mutable {
        const Point start = spec.start;
        const SolveResult res = run_solver([&spec](const Point& x) { return spec(x); }, start, cfg);
        return make_record(id, spec.name, n, res);
      }));
    }
  }
  std::vector<RunRecord> records;
  for (auto& j : jobs) records.push_back(j.get());
  assign_best_values(records);
  return records;
}

}  // namespace h2dfo
