#include "aim/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace aim {

void SolverConfig::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta must lie in (0, 1)");
  if (!(mu >= 0.0 && mu < 1.0)) throw ConfigError("mu must lie in [0, 1)");
  if (!(gtol > 0.0)) throw ConfigError("gtol must be positive");
  if (!(mtol > 0.0)) throw ConfigError("mtol must be positive");
  if (!(beta0 > 0.0)) throw ConfigError("beta0 must be positive");
  if (!(eps_fd > 0.0)) throw ConfigError("eps_fd must be positive");
  if (!(shrink_divisor > 1.0)) throw ConfigError("shrink_divisor must exceed 1");
  if (!(r_floor > 0.0)) throw ConfigError("r_floor must be positive");
  if (!(beta_max >= beta0)) throw ConfigError("beta_max must be >= beta0");
  if (max_rejections < 1) throw ConfigError("max_rejections must be >= 1");
}

inertia::Strategy make_strategy(inertia::Kind kind, const SolverConfig& config) {
  inertia::Strategy s;
  s.kind = kind;
  s.mu = config.mu;
  s.eps_fd = config.eps_fd;
  s.mtol = config.mtol;
  return s;
}

MetricDescriptor IterRecord::metric() const {
  if (m.size() == 0) return MetricDescriptor::identity();
  return MetricDescriptor(m, mu_used, 0.0);
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_iters: return "max_iters";
    case RunStatus::error: return "error";
  }
  return "error";
}

RunStatus run_status_from_string(const std::string& s) {
  if (s == "converged") return RunStatus::converged;
  if (s == "max_iters") return RunStatus::max_iters;
  if (s == "error") return RunStatus::error;
  throw std::invalid_argument("unknown run status: " + s);
}

double compute_gamma(const DenseVector& m, const DenseVector& g, double beta, double mu) {
  require_same_size(m, g, "compute_gamma");
  const double msq = m.squaredNorm();
  if (!(msq > 0.0)) return 0.0;
  return mu * (m.dot(g) / msq) * beta;
}

std::vector<double> compute_gamma_blockwise(const DenseVector& m, const DenseVector& g,
                                            double beta, const std::vector<double>& mu_blocks,
                                            const std::vector<Index>& partition, double mtol) {
  require_same_size(m, g, "compute_gamma_blockwise");
  if (partition.size() != mu_blocks.size()) {
    throw DimensionMismatch("compute_gamma_blockwise: one mu per block required");
  }
  Index total = 0;
  for (Index n : partition) {
    if (n <= 0) throw DimensionMismatch("compute_gamma_blockwise: empty block");
    total += n;
  }
  if (total != m.size()) {
    throw DimensionMismatch("compute_gamma_blockwise: block sizes do not sum to dimension");
  }

  std::vector<double> gammas;
  gammas.reserve(partition.size());
  Index offset = 0;
  for (std::size_t j = 0; j < partition.size(); ++j) {
    const double mu = mu_blocks[j];
    if (!(mu >= 0.0 && mu < 1.0)) {
      throw std::invalid_argument("compute_gamma_blockwise: block mu outside [0, 1)");
    }
    const auto mj = m.segment(offset, partition[j]);
    const auto gj = g.segment(offset, partition[j]);
    const double msq = mj.squaredNorm();
    gammas.push_back(std::sqrt(msq) < mtol ? 0.0 : mu * (mj.dot(gj) / msq) * beta);
    offset += partition[j];
  }
  return gammas;
}

DenseVector aim_step(const DenseVector& x, const DenseVector& g, double beta, double gamma,
                     const DenseVector& m) {
  require_same_size(x, g, "aim_step");
  if (gamma == 0.0) return x - beta * g;
  require_same_size(x, m, "aim_step");
  return x - beta * g + gamma * m;
}

double step_ratio(const DenseVector& x, const DenseVector& x_next, const DenseVector& g,
                  const DenseVector& g_next, double beta, const MetricDescriptor& d) {
  require_same_size(x, x_next, "step_ratio");
  require_same_size(g, g_next, "step_ratio");
  const DenseVector dx = x - x_next;
  const double denom = mnorm_sq(d, dx);
  if (!(denom > 0.0)) throw UndefinedRatio("step_ratio: x_next equals x");
  return beta * dx.dot(g - g_next) / denom;
}

BetaUpdate adapt_beta(double beta, double r, double eta, const SolverConfig& config) {
  if (r > eta) {
    return {false, beta / config.shrink_divisor * std::min(1.0, 1.0 / r)};
  }
  if (r < config.grow_trigger) {
    const double grown = beta * config.grow_factor / std::max(r, config.r_floor);
    return {true, std::min(grown, config.beta_max)};
  }
  return {true, beta};
}

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

RunTrace solve_aim(const ObjectiveOracle& oracle, const inertia::Strategy& strategy,
                   const DenseVector& x0, const SolverConfig& config) {
  config.validate();
  if (x0.size() != oracle.dimension()) {
    throw DimensionMismatch("solve_aim: x0 does not match the oracle dimension");
  }

  RunTrace trace;
  trace.solver = "aim_" + std::string(inertia::to_string(strategy.kind));
  trace.eta = config.eta;
  trace.adaptive_beta = config.adapt_beta;
  trace.gtol = config.gtol;

  const Stopwatch clock;
  DenseVector x = x0;
  DenseVector g(x.size());
  double f = oracle.evaluate(x, &g);
  trace.total_grad_evals = 1;
  double reached_at = clock.seconds();

  double beta = config.beta0;
  inertia::History history;

  auto base_record = [&](std::size_t k) {
    IterRecord rec;
    rec.k = k;
    if (config.keep_iterates) rec.x = x;
    rec.f = f;
    rec.grad_norm = g.norm();
    rec.elapsed = reached_at;
    rec.beta = beta;
    return rec;
  };
  auto finish = [&](std::size_t k, RunStatus status, std::string message) {
    trace.records.push_back(base_record(k));
    trace.status = status;
    trace.message = std::move(message);
    return trace;
  };

  if (!std::isfinite(f) || !all_finite(g)) {
    return finish(0, RunStatus::error, "non-finite value or gradient at x0");
  }

  for (std::size_t k = 0;; ++k) {
    const double gnorm = g.norm();
    if (gnorm < config.gtol) return finish(k, RunStatus::converged, {});
    if (k >= config.max_iters) return finish(k, RunStatus::max_iters, {});

    inertia::InertiaTerm term = inertia::compute(strategy, oracle, x, g, history);
    trace.total_grad_evals += static_cast<std::size_t>(term.extra_grad_evals);
    const MetricDescriptor metric(term.m, term.mu, 0.0);
    const MetricDescriptor& ratio_metric =
        config.relaxed_acceptance ? metric : MetricDescriptor::identity();

    int rejections = 0;
    for (;;) {
      const double gamma = compute_gamma(term.m, g, beta, term.mu);
      DenseVector x_next = aim_step(x, g, beta, gamma, term.m);
      const DenseVector dx = x - x_next;
      if (dx.isZero(0.0)) {
        // γm cancelled βg exactly; nothing left to move.
        return finish(k, gnorm < 10.0 * config.gtol ? RunStatus::converged : RunStatus::error,
                      "stalled: x_next == x");
      }

      DenseVector g_next(x.size());
      const double f_next = oracle.evaluate(x_next, &g_next);
      ++trace.total_grad_evals;
      if (!std::isfinite(f_next) || !all_finite(g_next)) {
        return finish(k, RunStatus::error, "non-finite value or gradient at trial point");
      }

      const double r = step_ratio(x, x_next, g, g_next, beta, ratio_metric);
      BetaUpdate update{true, beta};
      if (config.adapt_beta) {
        update = adapt_beta(beta, r, config.eta, config);
      } else if (r > config.eta) {
        return finish(k, RunStatus::error, "constant step violates the acceptance test");
      }

      if (!update.accepted) {
        beta = update.beta_next;
        ++rejections;
        ++trace.total_rejections;
        if (rejections > config.max_rejections || beta < config.beta_min) {
          return finish(k, RunStatus::error, "step-size rejection loop did not terminate");
        }
        continue;
      }

      IterRecord rec = base_record(k);
      rec.has_step = true;
      rec.gamma = gamma;
      rec.r = r;
      rec.mu_used = metric.is_sentinel() ? 0.0 : term.mu;
      if (config.keep_iterates && !metric.is_sentinel()) rec.m = term.m;
      rec.step_mnorm_sq = mnorm_sq(metric, dx);
      rec.inner_rejections = rejections;
      trace.records.push_back(std::move(rec));

      history.x_prev = std::move(x);
      history.g_prev = std::move(g);
      x = std::move(x_next);
      g = std::move(g_next);
      f = f_next;
      beta = update.beta_next;
      reached_at = clock.seconds();
      break;
    }
  }
}

}  // namespace aim
