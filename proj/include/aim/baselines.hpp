#pragma once

#include <cstddef>
#include <string_view>

#include "aim/core.hpp"
#include "aim/solver.hpp"

// Reference first-order methods used as comparison points. Each one writes
// a RunTrace with the same stopping rule ‖∇f(x^k)‖ <= gtol.
namespace aim::baselines {

enum class Method { gd, hb, nag, adagrad, adam };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);

struct BaselineConfig {
  Method method = Method::gd;
  double beta = 1e-2;     // step size (initial step for NAG)
  double gamma = 0.9;     // heavy-ball momentum
  double alpha1 = 0.9;    // Adam first-moment decay
  double alpha2 = 0.999;  // Adam second-moment decay
  double eps_stab = 1e-8;
  double gtol = 1e-6;
  std::size_t max_iters = 5000;
  /// Consecutive increases of f that end the run once f also exceeds f(x⁰).
  /// NAG is exempt; its backtracking cap is its only failure mode.
  int divergence_window = 10;
  int max_halvings = 60;       // NAG backtracking cap
  bool keep_iterates = true;

  void validate() const;
};

/// x⁺ = x − βg.
RunTrace solve_gd(const ObjectiveOracle& oracle, const DenseVector& x0,
                  const BaselineConfig& config);

/// x⁺ = x − βg + γ(x − x⁻); the first step has no momentum. When the oracle
/// gives a Lipschitz hint D, β must not exceed (1 − γ)/D.
RunTrace solve_heavy_ball(const ObjectiveOracle& oracle, const DenseVector& x0,
                          const BaselineConfig& config);

/// Accelerated gradient with backtracking: x⁺ = x̃ − β∇f(x̃) where
/// x̃ = x + θ_k(1 − θ_{k−1})/θ_{k−1} (x − x⁻), θ₀ = 1 and θ_k the positive
/// root of (1 − θ)β_k/θ² = β_{k−1}/θ_{k−1}². β halves until
/// f(x⁺) <= f(x̃) − (β/2)‖∇f(x̃)‖².
RunTrace solve_nag(const ObjectiveOracle& oracle, const DenseVector& x0,
                   const BaselineConfig& config);

/// Per-coordinate step β gᵢ / √(ĥᵢ + ε), ĥ accumulating g⊙g.
RunTrace solve_adagrad(const ObjectiveOracle& oracle, const DenseVector& x0,
                       const BaselineConfig& config);

/// x⁺ = x − β ĝ / √(ĥ + ε) with exponential moment averages and no bias
/// correction.
RunTrace solve_adam(const ObjectiveOracle& oracle, const DenseVector& x0,
                    const BaselineConfig& config);

RunTrace solve(const ObjectiveOracle& oracle, const DenseVector& x0,
               const BaselineConfig& config);

/// Positive root of c θ² + β θ − β = 0 with c = β_prev / θ_prev².
double nag_theta(double beta, double beta_prev, double theta_prev);

/// Moment state shared by AdaGrad and Adam; both start at zero.
struct MomentState {
  DenseVector g_avg;
  DenseVector h;
};

/// Updates ĥ ← ĥ + g⊙g and returns the step β g / √(ĥ + ε).
DenseVector adagrad_update(MomentState& state, const DenseVector& g, double beta, double eps);

/// Updates both averages and returns the step β ĝ / √(ĥ + ε).
DenseVector adam_update(MomentState& state, const DenseVector& g, double beta, double alpha1,
                        double alpha2, double eps);

}  // namespace aim::baselines
