#include "aim/baselines.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <string>

namespace aim::baselines {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::gd: return "gd";
    case Method::hb: return "hb";
    case Method::nag: return "nag";
    case Method::adagrad: return "adagrad";
    case Method::adam: return "adam";
  }
  return "gd";
}

Method method_from_string(std::string_view name) {
  if (name == "gd") return Method::gd;
  if (name == "hb") return Method::hb;
  if (name == "nag") return Method::nag;
  if (name == "adagrad") return Method::adagrad;
  if (name == "adam") return Method::adam;
  throw ConfigError("unknown baseline method: " + std::string(name));
}

void BaselineConfig::validate() const {
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
  if (!(alpha1 > 0.0 && alpha1 < 1.0) && method == Method::adam) {
    throw ConfigError("alpha1 must lie in (0, 1)");
  }
  if (!(alpha2 > 0.0 && alpha2 < 1.0) && method == Method::adam) {
    throw ConfigError("alpha2 must lie in (0, 1)");
  }
  if (!(eps_stab > 0.0)) throw ConfigError("eps_stab must be positive");
  if (!(gtol > 0.0)) throw ConfigError("gtol must be positive");
  if (divergence_window < 1) throw ConfigError("divergence_window must be >= 1");
  if (max_halvings < 1) throw ConfigError("max_halvings must be >= 1");
}

double nag_theta(double beta, double beta_prev, double theta_prev) {
  const double c = beta_prev / (theta_prev * theta_prev);
  // Rationalized root of c θ² + βθ − β = 0; avoids cancellation for small c.
  return 2.0 * beta / (beta + std::sqrt(beta * beta + 4.0 * c * beta));
}

DenseVector adagrad_update(MomentState& state, const DenseVector& g, double beta, double eps) {
  if (state.h.size() == 0) state.h = DenseVector::Zero(g.size());
  require_same_size(state.h, g, "adagrad_update");
  state.h += g.cwiseProduct(g);
  return beta * g.array() / (state.h.array() + eps).sqrt();
}

DenseVector adam_update(MomentState& state, const DenseVector& g, double beta, double alpha1,
                        double alpha2, double eps) {
  if (state.g_avg.size() == 0) state.g_avg = DenseVector::Zero(g.size());
  if (state.h.size() == 0) state.h = DenseVector::Zero(g.size());
  require_same_size(state.h, g, "adam_update");
  state.g_avg = alpha1 * state.g_avg + (1.0 - alpha1) * g;
  state.h = alpha2 * state.h + (1.0 - alpha2) * g.cwiseProduct(g);
  return beta * state.g_avg.array() / (state.h.array() + eps).sqrt();
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

/// Produces x^{k+1} from the current state. `gamma_out` receives the
/// momentum coefficient for the record.
using StepFn = std::function<DenseVector(std::size_t k, const DenseVector& x,
                                         const DenseVector& g, double& gamma_out)>;

// Shared loop for the fixed-rule methods (everything except NAG).
RunTrace run_fixed(const ObjectiveOracle& oracle, const DenseVector& x0,
                   const BaselineConfig& config, const StepFn& step) {
  if (x0.size() != oracle.dimension()) {
    throw DimensionMismatch("baseline: x0 does not match the oracle dimension");
  }
  RunTrace trace;
  trace.solver = std::string(to_string(config.method));
  trace.adaptive_beta = false;
  trace.gtol = config.gtol;

  const Stopwatch clock;
  DenseVector x = x0;
  DenseVector g(x.size());
  double f = oracle.evaluate(x, &g);
  trace.total_grad_evals = 1;
  double reached_at = clock.seconds();

  auto base_record = [&](std::size_t k) {
    IterRecord rec;
    rec.k = k;
    if (config.keep_iterates) rec.x = x;
    rec.f = f;
    rec.grad_norm = g.norm();
    rec.elapsed = reached_at;
    rec.beta = config.beta;
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

  // Momentum ripples can raise f for many steps in a row; only a run that
  // also climbs above f(x⁰) counts as diverging.
  const double f0 = f;
  int increases = 0;
  for (std::size_t k = 0;; ++k) {
    if (g.norm() <= config.gtol) return finish(k, RunStatus::converged, {});
    if (k >= config.max_iters) return finish(k, RunStatus::max_iters, {});

    double gamma = 0.0;
    DenseVector x_next = step(k, x, g, gamma);
    DenseVector g_next(x.size());
    const double f_next = oracle.evaluate(x_next, &g_next);
    ++trace.total_grad_evals;
    if (!std::isfinite(f_next) || !all_finite(g_next)) {
      return finish(k, RunStatus::error, "non-finite value or gradient");
    }

    IterRecord rec = base_record(k);
    rec.has_step = true;
    rec.gamma = gamma;
    rec.step_mnorm_sq = (x - x_next).squaredNorm();
    trace.records.push_back(std::move(rec));

    increases = f_next > f ? increases + 1 : 0;
    x = std::move(x_next);
    g = std::move(g_next);
    f = f_next;
    reached_at = clock.seconds();
    if (increases >= config.divergence_window && f > f0) {
      return finish(k + 1, RunStatus::error, "diverged: objective increased repeatedly");
    }
  }
}

}  // namespace

RunTrace solve_gd(const ObjectiveOracle& oracle, const DenseVector& x0,
                  const BaselineConfig& config) {
  BaselineConfig cfg = config;
  cfg.method = Method::gd;
  cfg.validate();
  return run_fixed(oracle, x0, cfg,
                   [&](std::size_t, const DenseVector& x, const DenseVector& g, double&) {
                     return DenseVector(x - cfg.beta * g);
                   });
}

RunTrace solve_heavy_ball(const ObjectiveOracle& oracle, const DenseVector& x0,
                          const BaselineConfig& config) {
  BaselineConfig cfg = config;
  cfg.method = Method::hb;
  cfg.validate();
  if (const auto D = oracle.lipschitz_hint()) {
    const double bound = (1.0 - cfg.gamma) / *D;
    if (cfg.beta > bound * (1.0 + 1e-12)) {
      throw ConfigError("heavy ball: beta exceeds (1 - gamma)/D = " + std::to_string(bound));
    }
  }
  DenseVector x_prev;
  return run_fixed(oracle, x0, cfg,
                   [&](std::size_t k, const DenseVector& x, const DenseVector& g, double& gamma) {
                     DenseVector next = x - cfg.beta * g;
                     // γ = 0 skips the term so the trace matches plain GD bit for bit.
                     if (k > 0 && cfg.gamma != 0.0) {
                       next += cfg.gamma * (x - x_prev);
                       gamma = cfg.gamma;
                     }
                     x_prev = x;
                     return next;
                   });
}

RunTrace solve_adagrad(const ObjectiveOracle& oracle, const DenseVector& x0,
                       const BaselineConfig& config) {
  BaselineConfig cfg = config;
  cfg.method = Method::adagrad;
  cfg.validate();
  MomentState state;
  return run_fixed(oracle, x0, cfg,
                   [&](std::size_t, const DenseVector& x, const DenseVector& g, double&) {
                     return DenseVector(x - adagrad_update(state, g, cfg.beta, cfg.eps_stab));
                   });
}

RunTrace solve_adam(const ObjectiveOracle& oracle, const DenseVector& x0,
                    const BaselineConfig& config) {
  BaselineConfig cfg = config;
  cfg.method = Method::adam;
  cfg.validate();
  MomentState state;
  return run_fixed(oracle, x0, cfg,
                   [&](std::size_t, const DenseVector& x, const DenseVector& g, double&) {
                     return DenseVector(
                         x - adam_update(state, g, cfg.beta, cfg.alpha1, cfg.alpha2, cfg.eps_stab));
                   });
}

RunTrace solve_nag(const ObjectiveOracle& oracle, const DenseVector& x0,
                   const BaselineConfig& config) {
  BaselineConfig cfg = config;
  cfg.method = Method::nag;
  cfg.validate();
  if (x0.size() != oracle.dimension()) {
    throw DimensionMismatch("solve_nag: x0 does not match the oracle dimension");
  }

  RunTrace trace;
  trace.solver = "nag";
  trace.adaptive_beta = true;
  trace.gtol = cfg.gtol;

  const Stopwatch clock;
  DenseVector x = x0;
  DenseVector x_prev = x0;
  DenseVector g(x.size());
  double f = oracle.evaluate(x, &g);
  trace.total_grad_evals = 1;
  double reached_at = clock.seconds();

  double beta = cfg.beta;
  double beta_prev = cfg.beta;
  double theta_prev = 1.0;

  auto base_record = [&](std::size_t k) {
    IterRecord rec;
    rec.k = k;
    if (cfg.keep_iterates) rec.x = x;
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
    if (g.norm() <= cfg.gtol) return finish(k, RunStatus::converged, {});
    if (k >= cfg.max_iters) return finish(k, RunStatus::max_iters, {});

    int halvings = 0;
    for (;;) {
      const double theta = k == 0 ? 1.0 : nag_theta(beta, beta_prev, theta_prev);
      const double coef = k == 0 ? 0.0 : theta * (1.0 - theta_prev) / theta_prev;
      const DenseVector x_tilde = coef == 0.0 ? x : DenseVector(x + coef * (x - x_prev));
      DenseVector g_tilde(x.size());
      const double f_tilde = coef == 0.0 ? f : oracle.evaluate(x_tilde, &g_tilde);
      if (coef == 0.0) {
        g_tilde = g;
      } else {
        ++trace.total_grad_evals;
      }

      DenseVector x_next = x_tilde - beta * g_tilde;
      DenseVector g_next(x.size());
      const double f_next = oracle.evaluate(x_next, &g_next);
      ++trace.total_grad_evals;

      const bool finite = std::isfinite(f_tilde) && std::isfinite(f_next) && all_finite(g_next);
      if (finite && f_next <= f_tilde - 0.5 * beta * g_tilde.squaredNorm()) {
        IterRecord rec = base_record(k);
        rec.has_step = true;
        rec.gamma = coef;
        rec.r = theta;
        rec.step_mnorm_sq = (x - x_next).squaredNorm();
        rec.inner_rejections = halvings;
        trace.records.push_back(std::move(rec));

        x_prev = std::move(x);
        x = std::move(x_next);
        g = std::move(g_next);
        f = f_next;
        beta_prev = beta;
        theta_prev = theta;
        reached_at = clock.seconds();
        break;
      }

      beta *= 0.5;
      ++halvings;
      ++trace.total_rejections;
      if (halvings > cfg.max_halvings) {
        return finish(k, RunStatus::error, "backtracking exceeded the halving limit");
      }
    }
  }
}

RunTrace solve(const ObjectiveOracle& oracle, const DenseVector& x0,
               const BaselineConfig& config) {
  switch (config.method) {
    case Method::gd: return solve_gd(oracle, x0, config);
    case Method::hb: return solve_heavy_ball(oracle, x0, config);
    case Method::nag: return solve_nag(oracle, x0, config);
    case Method::adagrad: return solve_adagrad(oracle, x0, config);
    case Method::adam: return solve_adam(oracle, x0, config);
  }
  throw ConfigError("unknown baseline method");
}

}  // namespace aim::baselines
