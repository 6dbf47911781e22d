#include "aim/bench/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <set>
#include <thread>

#include "aim/bench/report.hpp"
#include "aim/problems/objectives.hpp"

namespace aim::bench {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<const char*, 9> kSolverOrder = {
    "gd", "hb", "nag", "adagrad", "adam", "aim_v", "aim_a", "aim_qn", "aim_hg"};

const std::vector<double> kDefaultBetaGrid = {1e-3, 2e-3, 5e-3, 1e-2, 2e-2,
                                              5e-2, 1e-1, 2e-1, 5e-1, 1.0};

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

std::vector<double> real_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(where + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::pair<Index, Index>> shape_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array");
  std::vector<std::pair<Index, Index>> out;
  for (const auto& s : j) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() ||
        !s[1].is_number_integer() || s[0].get<long long>() <= 0 || s[1].get<long long>() <= 0) {
      throw ConfigError(where + ": each shape must be [m, n] with positive integers");
    }
    out.emplace_back(s[0].get<Index>(), s[1].get<Index>());
  }
  return out;
}

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

SolverSpec parse_solver(const json& j) {
  SolverSpec s;
  if (j.is_string()) {
    s.name = j.get<std::string>();
  } else if (j.is_object()) {
    if (!j.contains("name") || !j["name"].is_string()) {
      throw ConfigError("solver entry needs a string 'name'");
    }
    s.name = j["name"].get<std::string>();
  } else {
    throw ConfigError("solver entries must be names or objects");
  }
  solver_rank(s.name);  // throws for unknown names
  const json opts = j.is_object() ? j : json::object();
  const std::string where = "solver " + s.name;

  if (s.name.rfind("aim_", 0) == 0) {
    s.is_aim = true;
    s.kind = inertia::kind_from_string(s.name.substr(4));
    reject_unknown_keys(opts, {"name", "eta", "mu", "eps_fd", "beta0", "mtol"}, where);
    s.aim.eta = opts.value("eta", s.aim.eta);
    s.aim.mu = opts.value("mu", s.aim.mu);
    s.aim.eps_fd = opts.value("eps_fd", s.aim.eps_fd);
    s.aim.beta0 = opts.value("beta0", s.aim.beta0);
    s.aim.mtol = opts.value("mtol", s.aim.mtol);
    s.aim.keep_iterates = false;
    return s;
  }

  auto& b = s.baseline;
  b.method = baselines::method_from_string(s.name);
  b.keep_iterates = false;
  reject_unknown_keys(opts, {"name", "beta", "beta_grid", "gamma", "alpha1", "alpha2", "eps_stab"},
                      where);
  b.gamma = opts.value("gamma", b.gamma);
  b.alpha1 = opts.value("alpha1", b.alpha1);
  b.alpha2 = opts.value("alpha2", b.alpha2);
  b.eps_stab = opts.value("eps_stab", b.eps_stab);
  if (opts.contains("beta_grid")) {
    s.beta_grid = real_list(opts["beta_grid"], where + ".beta_grid");
  }
  if (opts.contains("beta")) {
    b.beta = opts["beta"].get<double>();
    if (!opts.contains("beta_grid")) s.beta_grid.clear();
  } else {
    switch (b.method) {
      case baselines::Method::gd:
      case baselines::Method::adagrad:
      case baselines::Method::adam:
        if (s.beta_grid.empty()) s.beta_grid = kDefaultBetaGrid;
        break;
      case baselines::Method::nag:
        b.beta = 1.0;
        break;
      case baselines::Method::hb:
        break;  // β = (1 − γ)/D from the problem's hint unless a grid is given
    }
  }
  for (double beta : s.beta_grid) {
    if (!(beta > 0.0)) throw ConfigError(where + ": beta_grid entries must be positive");
  }
  b.validate();
  return s;
}

// Fewest iterations among converged runs; ties keep the larger step.
// Without a converged run, the smallest finite final gradient norm.
bool better(const RunTrace& cand, const RunTrace& best) {
  const bool cc = cand.status == RunStatus::converged;
  const bool bc = best.status == RunStatus::converged;
  if (cc != bc) return cc;
  if (cc) return cand.iterations() < best.iterations();
  const double gc = cand.final_record().grad_norm;
  const double gb = best.final_record().grad_norm;
  if (!std::isfinite(gb)) return std::isfinite(gc);
  return std::isfinite(gc) && gc < gb;
}

}  // namespace

int solver_rank(const std::string& name) {
  for (std::size_t i = 0; i < kSolverOrder.size(); ++i) {
    if (name == kSolverOrder[i]) return static_cast<int>(i);
  }
  throw ConfigError("unknown solver '" + name + "'");
}

ExperimentSpec parse_experiment_spec(const std::string& json_text, const fs::path& base_dir,
                                     const SpecOverrides& overrides) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("experiment spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("experiment spec must be a JSON object");
  reject_unknown_keys(j,
                      {"name", "problem", "gtol", "max_iters", "repetitions", "seed", "output",
                       "l2lp", "logistic", "solvers"},
                      "spec");

  ExperimentSpec spec;
  try {
    spec.name = j.value("name", std::string("experiment"));
    const std::string problem = j.at("problem").get<std::string>();
    if (problem == "l2lp") {
      spec.problem = ProblemKind::l2lp;
    } else if (problem == "logistic") {
      spec.problem = ProblemKind::logistic;
    } else {
      throw ConfigError("problem must be 'l2lp' or 'logistic'");
    }
    spec.gtol = j.value("gtol", spec.gtol);
    spec.max_iters = j.value("max_iters", spec.max_iters);
    spec.repetitions = j.value("repetitions", spec.repetitions);
    spec.seed = j.value("seed", spec.seed);
    spec.output_dir = j.value("output", std::string("bench_out/") + spec.name);

    if (spec.problem == ProblemKind::l2lp) {
      const json& g = j.at("l2lp");
      reject_unknown_keys(g,
                          {"shapes", "full_scale_shapes", "densities", "p", "zero_prob",
                           "noise_std", "eps_smooth"},
                          "l2lp");
      spec.l2lp.shapes = shape_list(g.at("shapes"), "l2lp.shapes");
      if (g.contains("full_scale_shapes")) {
        spec.l2lp.full_scale_shapes = shape_list(g["full_scale_shapes"], "l2lp.full_scale_shapes");
      }
      spec.l2lp.densities = real_list(g.at("densities"), "l2lp.densities");
      spec.l2lp.ps = real_list(g.at("p"), "l2lp.p");
      spec.l2lp.zero_prob = g.value("zero_prob", spec.l2lp.zero_prob);
      spec.l2lp.noise_std = g.value("noise_std", spec.l2lp.noise_std);
      spec.l2lp.eps_smooth = g.value("eps_smooth", spec.l2lp.eps_smooth);
      for (double p : spec.l2lp.ps) {
        if (!(p > 0.0 && p <= 2.0)) throw ConfigError("l2lp.p entries must lie in (0, 2]");
      }
      for (double r : spec.l2lp.densities) {
        if (!(r > 0.0 && r <= 1.0)) throw ConfigError("l2lp.densities must lie in (0, 1]");
      }
      if (!(spec.l2lp.eps_smooth > 0.0)) throw ConfigError("l2lp.eps_smooth must be positive");
    } else {
      const json& g = j.at("logistic");
      reject_unknown_keys(g, {"dataset", "synthetic", "lambdas"}, "logistic");
      spec.logistic.lambdas = real_list(g.at("lambdas"), "logistic.lambdas");
      for (double l : spec.logistic.lambdas) {
        if (!(l >= 0.0)) throw ConfigError("logistic.lambdas must be non-negative");
      }
      if (g.contains("dataset") && !g["dataset"].is_null()) {
        fs::path path = g["dataset"].get<std::string>();
        if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
        if (!fs::is_regular_file(path)) {
          throw ConfigError("dataset not found: " + path.string());
        }
        spec.logistic.dataset = path;
      } else {
        const json s = g.value("synthetic", json::object());
        reject_unknown_keys(s, {"m", "n", "density", "noise_std"}, "logistic.synthetic");
        spec.logistic.synthetic.m = s.value("m", Index{2000});
        spec.logistic.synthetic.n = s.value("n", Index{500});
        spec.logistic.synthetic.density = s.value("density", 0.05);
        spec.logistic.synthetic.noise_std = s.value("noise_std", 1.0);
      }
    }

    const json& solvers = j.at("solvers");
    if (!solvers.is_array() || solvers.empty()) {
      throw ConfigError("solvers must be a non-empty array");
    }
    std::set<std::string> seen;
    for (const auto& s : solvers) {
      SolverSpec parsed = parse_solver(s);
      if (!seen.insert(parsed.name).second) {
        throw ConfigError("solver '" + parsed.name + "' listed twice");
      }
      spec.solvers.push_back(std::move(parsed));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment spec: ") + e.what());
  }

  std::stable_sort(spec.solvers.begin(), spec.solvers.end(),
                   [](const SolverSpec& a, const SolverSpec& b) {
                     return solver_rank(a.name) < solver_rank(b.name);
                   });
  for (auto& s : spec.solvers) {
    s.aim.gtol = spec.gtol;
    s.aim.max_iters = spec.max_iters;
    s.baseline.gtol = spec.gtol;
    s.baseline.max_iters = spec.max_iters;
    if (s.is_aim) s.aim.validate();
  }

  if (overrides.seed) spec.seed = *overrides.seed;
  if (overrides.output_dir) spec.output_dir = *overrides.output_dir;
  spec.full_scale = overrides.full_scale;
  if (spec.full_scale && spec.problem == ProblemKind::l2lp &&
      spec.l2lp.full_scale_shapes.empty()) {
    throw ConfigError("--full-scale needs l2lp.full_scale_shapes in the experiment file");
  }

  if (!(spec.gtol > 0.0)) throw ConfigError("gtol must be positive");
  if (spec.max_iters == 0) throw ConfigError("max_iters must be positive");
  if (spec.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (spec.output_dir.empty()) throw ConfigError("output directory is empty");
  return spec;
}

ExperimentSpec load_experiment_spec(const fs::path& path, const SpecOverrides& overrides) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  return parse_experiment_spec(text, path.parent_path(), overrides);
}

std::vector<Cell> enumerate_cells(const ExperimentSpec& spec) {
  std::vector<Cell> cells;
  if (spec.problem == ProblemKind::l2lp) {
    const auto& shapes = spec.full_scale ? spec.l2lp.full_scale_shapes : spec.l2lp.shapes;
    for (double p : spec.l2lp.ps)
      for (const auto& [m, n] : shapes)
        for (double r : spec.l2lp.densities) {
          Cell c;
          c.index = cells.size();
          c.m = m;
          c.n = n;
          c.density = r;
          c.p = p;
          c.id = "p" + format_g(p) + "_m" + std::to_string(m) + "_n" + std::to_string(n) + "_r" +
                 format_g(r);
          cells.push_back(std::move(c));
        }
  } else {
    const std::string source =
        spec.logistic.dataset ? spec.logistic.dataset->stem().string() : "synthetic";
    for (double lambda : spec.logistic.lambdas) {
      Cell c;
      c.index = cells.size();
      c.lambda = lambda;
      c.id = source + "_lam" + format_g(lambda);
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

std::uint64_t cell_seed(const ExperimentSpec& spec, const Cell& cell, int rep) {
  return spec.seed + 1000u * static_cast<std::uint64_t>(cell.index) +
         static_cast<std::uint64_t>(rep);
}

std::unique_ptr<ObjectiveOracle> build_problem(const ExperimentSpec& spec, const Cell& cell,
                                               std::uint64_t seed,
                                               const problems::LibsvmData* dataset) {
  if (spec.problem == ProblemKind::l2lp) {
    problems::SyntheticSpec s;
    s.m = cell.m;
    s.n = cell.n;
    s.density = cell.density;
    s.zero_prob = spec.l2lp.zero_prob;
    s.noise_std = spec.l2lp.noise_std;
    s.seed = seed;
    auto data = problems::generate_synthetic(s);
    return std::make_unique<problems::L2LpProblem>(std::move(data.A), std::move(data.b),
                                                   data.lambda, cell.p, spec.l2lp.eps_smooth);
  }
  if (dataset) {
    return std::make_unique<problems::LogisticL2Problem>(dataset->A, dataset->labels,
                                                         cell.lambda);
  }
  problems::SyntheticSpec s = spec.logistic.synthetic;
  s.seed = seed;
  auto data = problems::generate_synthetic_classification(s);
  return std::make_unique<problems::LogisticL2Problem>(std::move(data.A), std::move(data.labels),
                                                       cell.lambda);
}

int default_threads() {
  if (const char* env = std::getenv("BENCH_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::pair<RunTrace, double> run_solver(const SolverSpec& solver, const ObjectiveOracle& oracle,
                                       const DenseVector& x0, double gtol,
                                       std::size_t max_iters) {
  if (solver.is_aim) {
    SolverConfig cfg = solver.aim;
    cfg.gtol = gtol;
    cfg.max_iters = max_iters;
    return {solve_aim(oracle, make_strategy(solver.kind, cfg), x0, cfg), cfg.beta0};
  }

  baselines::BaselineConfig cfg = solver.baseline;
  cfg.gtol = gtol;
  cfg.max_iters = max_iters;

  std::vector<double> candidates = solver.beta_grid;
  if (cfg.method == baselines::Method::hb) {
    const auto D = oracle.lipschitz_hint();
    if (D) {
      const double bound = (1.0 - cfg.gamma) / *D;
      if (candidates.empty()) candidates.push_back(bound);
      for (double& b : candidates) b = std::min(b, bound);
    }
  }
  if (candidates.empty()) candidates.push_back(cfg.beta);

  // Largest step first. Once a run has converged in K iterations, later
  // candidates are cut off at K: they cannot win, and the cut-off run is
  // never better than a converged one.
  std::sort(candidates.begin(), candidates.end(), std::greater<>());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::optional<RunTrace> best;
  double best_beta = candidates.front();
  for (double beta : candidates) {
    cfg.beta = beta;
    if (best && best->status == RunStatus::converged) cfg.max_iters = best->iterations();
    RunTrace t = baselines::solve(oracle, x0, cfg);
    if (!best || better(t, *best)) {
      best = std::move(t);
      best_beta = beta;
    }
  }
  return {std::move(*best), best_beta};
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  const auto cells = enumerate_cells(spec);
  std::optional<problems::LibsvmData> dataset;
  if (spec.problem == ProblemKind::logistic && spec.logistic.dataset) {
    dataset = problems::load_libsvm_file(spec.logistic.dataset->string());
  }
  fs::create_directories(spec.output_dir);
  const fs::path trace_root = spec.output_dir / "traces";

  struct Task {
    const Cell* cell;
    int rep;
  };
  std::vector<Task> tasks;
  for (const auto& c : cells)
    for (int rep = 0; rep < spec.repetitions; ++rep) tasks.push_back({&c, rep});

  std::vector<std::vector<ResultRow>> per_task(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const Task& task = tasks[i];
        const std::uint64_t seed = cell_seed(spec, *task.cell, task.rep);
        const auto oracle =
            build_problem(spec, *task.cell, seed, dataset ? &*dataset : nullptr);
        const DenseVector x0 = DenseVector::Zero(oracle->dimension());
        for (const auto& solver : spec.solvers) {
          auto [trace, beta] = run_solver(solver, *oracle, x0, spec.gtol, spec.max_iters);
          trace.solver = solver.name;
          ResultRow row = make_row(trace, task.cell->id, seed, beta);
          if (options.write_traces) {
            write_trace(trace_root / task.cell->id / trace_stem(solver.name, seed), trace, row);
          }
          per_task[i].push_back(std::move(row));
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const int threads = std::max(
      1, std::min<int>(options.threads > 0 ? options.threads : default_threads(),
                       static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<ResultRow> rows;
  for (auto& v : per_task)
    for (auto& r : v) rows.push_back(std::move(r));

  const Layout layout = spec.problem == ProblemKind::logistic ? Layout::by_lambda : Layout::by_cell;
  write_text_file(spec.output_dir / "results.csv", results_csv(rows));
  write_text_file(spec.output_dir / "summary.csv", emit_summary(rows, layout, true));
  if (options.write_traces) emit_plot_data(trace_root, spec.output_dir / "plot");
  return rows;
}

}  // namespace aim::bench
