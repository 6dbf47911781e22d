#pragma once

#include <string_view>

#include "aim/core.hpp"

// Inertial-term constructions. Every routine returns either a usable
// direction or the zero sentinel (an all-zero vector), under which the AIM
// step degrades to a plain gradient step.
namespace aim::inertia {

enum class Kind { velocity, acceleration, quasi_newton, hessian_gradient };

std::string_view to_string(Kind kind);
Kind kind_from_string(std::string_view name);

/// Parameters for one inertia rule.
struct Strategy {
  Kind kind = Kind::hessian_gradient;
  double mu = 0.75;              // fixed inertial weight (ignored by quasi_newton)
  double eps_fd = 1e-3;          // finite-difference step for hessian_gradient
  double alpha_safeguard = 2.0;  // c in α = c‖s‖²/(sᵀy)
  double mtol = kDefaultMtol;
};

/// Previous iterate and gradient; absent at k = 0.
struct History {
  DenseVector x_prev;
  DenseVector g_prev;
  bool present() const { return x_prev.size() > 0; }
};

bool is_zero_sentinel(const DenseVector& m);

/// normalize(x_k − x_prev), or the zero sentinel.
DenseVector inertia_velocity(const DenseVector& x_k, const DenseVector& x_prev,
                             double mtol = kDefaultMtol);

/// normalize(g_k − g_prev), or the zero sentinel.
DenseVector inertia_acceleration(const DenseVector& g_k, const DenseVector& g_prev,
                                 double mtol = kDefaultMtol);

/// α = c‖s‖²/(sᵀy), strictly above the lower bound when c > 1.
/// Throws CurvatureViolation when sᵀy <= 0.
double select_alpha(const DenseVector& s, const DenseVector& y, double c = 2.0);

struct QuasiNewtonInertia {
  DenseVector m;  // α y − s, not normalized
  double mu;      // ‖m‖² / (α mᵀy)
};

/// m = αy − s with the weight that makes M s = α y hold exactly.
/// Throws DegenerateSecant if mᵀy <= 0 or the weight leaves (0, 1).
QuasiNewtonInertia inertia_quasi_newton(const DenseVector& s, const DenseVector& y, double alpha);

/// normalize((g − ∇f(x − eps·g)) / eps), or the zero sentinel.
/// Costs one gradient evaluation.
DenseVector inertia_hessian_gradient(const ObjectiveOracle& oracle, const DenseVector& x,
                                     const DenseVector& g, double eps,
                                     double mtol = kDefaultMtol);

/// What a strategy hands the solver for one outer iteration.
struct InertiaTerm {
  DenseVector m;  // zero sentinel or the direction
  double mu = 0.0;
  int extra_grad_evals = 0;
  bool fell_back = false;  // quasi-Newton secant unusable this iteration
};

/// Dispatches on `strategy.kind`. Without history, velocity, acceleration
/// and quasi_newton return the zero sentinel.
InertiaTerm compute(const Strategy& strategy, const ObjectiveOracle& oracle, const DenseVector& x,
                    const DenseVector& g, const History& history);

}  // namespace aim::inertia
