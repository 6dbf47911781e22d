#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aim/core.hpp"
#include "aim/inertia.hpp"

namespace aim {

/// Step-control settings for the Adaptive Inertial Method.
///
/// Defaults follow the reference schedule: η = 0.9, μ = 0.75, ε = 1e-3,
/// gtol = 1e-6, mtol = 1e-8, β₀ = 1, shrink by 1.5 on rejection, grow by
/// 2/r when r < 0.5.
struct SolverConfig {
  double eta = 0.9;
  double mu = 0.75;
  double eps_fd = 1e-3;
  double gtol = 1e-6;
  double mtol = kDefaultMtol;
  double beta0 = 1.0;
  std::size_t max_iters = 5000;

  double shrink_divisor = 1.5;
  double grow_trigger = 0.5;
  double grow_factor = 2.0;
  double r_floor = 1e-3;   // growth uses 2/max(r, r_floor)
  double beta_max = 1e6;
  double beta_min = 1e-16;
  int max_rejections = 60;

  /// Off: β stays at beta0 and any step with r > η ends the run in error.
  bool adapt_beta = true;
  /// On: r uses the M-norm denominator; off: the Euclidean one.
  bool relaxed_acceptance = true;
  /// Off: records keep scalars only (no x, no inertia direction).
  bool keep_iterates = true;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// Strategy with μ, ε and mtol taken from `config`.
inertia::Strategy make_strategy(inertia::Kind kind, const SolverConfig& config);

/// State at x^k together with the step that left it. The last record of a
/// run has `has_step == false`; its `beta` is the step size that would have
/// been tried next.
struct IterRecord {
  std::size_t k = 0;
  DenseVector x;  // empty unless keep_iterates
  double f = 0.0;
  double grad_norm = 0.0;
  double elapsed = 0.0;  // seconds from solver start until x^k was reached

  bool has_step = false;
  double beta = 0.0;
  double gamma = 0.0;
  double r = 0.0;
  double mu_used = 0.0;
  DenseVector m;               // inertia direction of the step; empty means identity metric
  double step_mnorm_sq = 0.0;  // ‖x^k − x^{k+1}‖²_{M_k}
  int inner_rejections = 0;

  MetricDescriptor metric() const;
};

enum class RunStatus { converged, max_iters, error };
std::string to_string(RunStatus status);
RunStatus run_status_from_string(const std::string& s);

struct RunTrace {
  std::string solver;
  std::vector<IterRecord> records;
  RunStatus status = RunStatus::error;
  std::string message;
  std::size_t total_grad_evals = 0;
  std::size_t total_rejections = 0;

  // Settings the verification routines need.
  double eta = 0.0;
  bool adaptive_beta = true;
  double gtol = 0.0;

  std::size_t iterations() const { return records.empty() ? 0 : records.back().k; }
  const IterRecord& final_record() const { return records.back(); }
};

/// γ = μ (mᵀg / ‖m‖²) β; zero for the zero sentinel.
double compute_gamma(const DenseVector& m, const DenseVector& g, double beta, double mu);

/// Per-block γ_j = μ_j (m_jᵀ g_j / ‖m_j‖²) β; blocks with ‖m_j‖ < mtol get 0.
std::vector<double> compute_gamma_blockwise(const DenseVector& m, const DenseVector& g,
                                            double beta, const std::vector<double>& mu_blocks,
                                            const std::vector<Index>& partition,
                                            double mtol = kDefaultMtol);

/// x − βg + γm.
DenseVector aim_step(const DenseVector& x, const DenseVector& g, double beta, double gamma,
                     const DenseVector& m);

/// r = β (x − x⁺)ᵀ(g − g⁺) / ‖x − x⁺‖²_M. Throws UndefinedRatio when x⁺ = x.
double step_ratio(const DenseVector& x, const DenseVector& x_next, const DenseVector& g,
                  const DenseVector& g_next, double beta, const MetricDescriptor& d);

struct BetaUpdate {
  bool accepted;
  double beta_next;
};

/// Acceptance test and step-size update for one trial step.
BetaUpdate adapt_beta(double beta, double r, double eta, const SolverConfig& config = {});

/// Runs AIM from x0 until ‖∇f‖ < gtol, max_iters, or an error.
RunTrace solve_aim(const ObjectiveOracle& oracle, const inertia::Strategy& strategy,
                   const DenseVector& x0, const SolverConfig& config);

}  // namespace aim
