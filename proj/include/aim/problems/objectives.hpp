#pragma once

#include <Eigen/Dense>

#include "aim/core.hpp"
#include "aim/problems/sparse_matrix.hpp"

namespace aim::problems {

/// f(x) = −(1/N) Σ [bᵢ log σ(aᵢᵀx) + (1−bᵢ) log(1−σ(aᵢᵀx))] + (λ/2)‖x‖²
/// with labels bᵢ ∈ {0, 1}. The loss is evaluated as softplus(z) − b·z so it
/// stays finite for any |z|.
class LogisticL2Problem final : public ObjectiveOracle {
 public:
  LogisticL2Problem(SparseMatrix A, DenseVector labels, double lambda);

  Index dimension() const override { return A_.cols(); }
  double evaluate(const DenseVector& x, DenseVector* grad) const override;
  std::optional<DenseVector> hessian_vector(const DenseVector& x,
                                            const DenseVector& v) const override;
  /// ‖A‖²/(4N) + λ
  std::optional<double> lipschitz_hint() const override;

  const SparseMatrix& design() const { return A_; }
  const DenseVector& labels() const { return b_; }
  double lambda() const { return lambda_; }
  Index samples() const { return A_.rows(); }

 private:
  SparseMatrix A_;
  DenseVector b_;
  double lambda_;
};

/// Value and gradient of the logistic objective at x.
double logistic_value_grad(const LogisticL2Problem& problem, const DenseVector& x,
                           DenseVector* grad);

/// Numerically stable logistic sigmoid.
double sigmoid(double z);

/// C¹ surrogate for |z|: |z| outside [−ε, ε], z²/(2ε) + ε/2 inside.
double smooth_abs(double z, double eps);
/// d/dz smooth_abs: sign(z) outside, z/ε inside.
double smooth_abs_derivative(double z, double eps);

/// f(x) = ½‖Ax − b‖² + λ Σᵢ s(xᵢ, ε)^p for 0 < p < 2, and the exact ridge
/// penalty λ‖x‖² at p = 2.
class L2LpProblem final : public ObjectiveOracle {
 public:
  L2LpProblem(SparseMatrix A, DenseVector b, double lambda, double p, double eps_smooth);

  Index dimension() const override { return A_.cols(); }
  double evaluate(const DenseVector& x, DenseVector* grad) const override;
  std::optional<DenseVector> hessian_vector(const DenseVector& x,
                                            const DenseVector& v) const override;
  std::optional<double> lipschitz_hint() const override;

  const SparseMatrix& design() const { return A_; }
  const DenseVector& rhs() const { return b_; }
  double lambda() const { return lambda_; }
  double p() const { return p_; }
  double eps_smooth() const { return eps_; }

 private:
  SparseMatrix A_;
  DenseVector b_;
  double lambda_;
  double p_;
  double eps_;
};

double l2lp_value_grad(const L2LpProblem& problem, const DenseVector& x, DenseVector* grad);

/// f(x) = ½ xᵀQx − cᵀx with Q symmetric positive definite.
class QuadraticProblem final : public ObjectiveOracle {
 public:
  QuadraticProblem(Eigen::MatrixXd Q, DenseVector c);

  /// Q = diag(d), c = 0.
  static QuadraticProblem diagonal(const DenseVector& d);

  Index dimension() const override { return c_.size(); }
  double evaluate(const DenseVector& x, DenseVector* grad) const override;
  std::optional<DenseVector> hessian_vector(const DenseVector& x,
                                            const DenseVector& v) const override;
  /// λ_max(Q)
  std::optional<double> lipschitz_hint() const override { return lambda_max_; }

  const Eigen::MatrixXd& hessian() const { return Q_; }
  const DenseVector& minimizer() const { return x_star_; }
  double optimal_value() const { return f_star_; }
  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }

 private:
  Eigen::MatrixXd Q_;
  DenseVector c_;
  DenseVector x_star_;
  double f_star_ = 0.0;
  double lambda_min_ = 0.0;
  double lambda_max_ = 0.0;
};

}  // namespace aim::problems
