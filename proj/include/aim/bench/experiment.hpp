#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aim/baselines.hpp"
#include "aim/bench/trace_io.hpp"
#include "aim/inertia.hpp"
#include "aim/problems/libsvm.hpp"
#include "aim/problems/synthetic.hpp"
#include "aim/solver.hpp"

namespace aim::bench {

enum class ProblemKind { logistic, l2lp };

/// One solver entry. AIM entries carry a SolverConfig; baselines carry a
/// BaselineConfig and, for gd/adagrad/adam/hb, a step-size grid searched
/// per run (fewest iterations among converged runs wins).
struct SolverSpec {
  std::string name;  // gd, hb, nag, adagrad, adam, aim_v, aim_a, aim_qn, aim_hg
  bool is_aim = false;
  inertia::Kind kind = inertia::Kind::hessian_gradient;
  SolverConfig aim;
  baselines::BaselineConfig baseline;
  std::vector<double> beta_grid;
};

struct L2LpGrid {
  std::vector<std::pair<Index, Index>> shapes;             // (m, n)
  std::vector<std::pair<Index, Index>> full_scale_shapes;  // used with --full-scale
  std::vector<double> densities;
  std::vector<double> ps;
  double zero_prob = 0.5;
  double noise_std = 1.0;
  double eps_smooth = 0.1;
};

struct LogisticSetup {
  std::optional<std::filesystem::path> dataset;  // LIBSVM file; synthetic data when unset
  problems::SyntheticSpec synthetic;             // shape and density of synthetic data
  std::vector<double> lambdas;
};

struct ExperimentSpec {
  std::string name;
  ProblemKind problem = ProblemKind::l2lp;
  L2LpGrid l2lp;
  LogisticSetup logistic;
  std::vector<SolverSpec> solvers;  // kept in canonical solver order
  double gtol = 1e-6;
  std::size_t max_iters = 5000;
  int repetitions = 3;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  bool full_scale = false;
};

/// Canonical reporting order: gd, hb, nag, adagrad, adam, aim_v, aim_a,
/// aim_qn, aim_hg. Unknown names throw ConfigError.
int solver_rank(const std::string& name);

struct SpecOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
  bool full_scale = false;
};

/// Parses and validates a JSON experiment. Relative dataset paths resolve
/// against `base_dir`. Throws ConfigError for unknown solvers, bad values or
/// a dataset path that does not exist.
ExperimentSpec parse_experiment_spec(const std::string& json_text,
                                     const std::filesystem::path& base_dir = {},
                                     const SpecOverrides& overrides = {});
ExperimentSpec load_experiment_spec(const std::filesystem::path& path,
                                    const SpecOverrides& overrides = {});

/// One problem instance family. Repetition `rep` uses seed
/// spec.seed + 1000·index + rep.
struct Cell {
  std::string id;
  std::size_t index = 0;
  // l2lp
  Index m = 0;
  Index n = 0;
  double density = 0.0;
  double p = 0.0;
  // logistic
  double lambda = 0.0;
};

std::vector<Cell> enumerate_cells(const ExperimentSpec& spec);
std::uint64_t cell_seed(const ExperimentSpec& spec, const Cell& cell, int rep);

/// Builds the objective for one (cell, repetition). `dataset` holds the
/// already loaded LIBSVM data when the experiment names one.
std::unique_ptr<ObjectiveOracle> build_problem(const ExperimentSpec& spec, const Cell& cell,
                                               std::uint64_t seed,
                                               const problems::LibsvmData* dataset);

struct RunOptions {
  int threads = 0;           // 0: BENCH_THREADS, else hardware concurrency
  bool write_traces = true;  // under <output_dir>/traces/<cell>/
};

/// Value of BENCH_THREADS when set and positive, else hardware concurrency.
int default_threads();

/// Runs every (cell × repetition × solver) from x⁰ = 0 and writes traces,
/// results.csv and summary.csv to the output directory. Rows come back in
/// (cell, repetition, solver) order regardless of thread count.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// Runs one solver entry, including its step-size search. Returns the trace
/// of the selected run and the step size it used.
std::pair<RunTrace, double> run_solver(const SolverSpec& solver, const ObjectiveOracle& oracle,
                                       const DenseVector& x0, double gtol,
                                       std::size_t max_iters);

}  // namespace aim::bench
