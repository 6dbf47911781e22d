#include "aim/problems/objectives.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aim::problems {
namespace {

// log(1 + e^z) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// ---------------------------------------------------------------------------
// Logistic regression

LogisticL2Problem::LogisticL2Problem(SparseMatrix A, DenseVector labels, double lambda)
    : A_(std::move(A)), b_(std::move(labels)), lambda_(lambda) {
  if (b_.size() != A_.rows()) throw DimensionMismatch("LogisticL2Problem: one label per row");
  if (A_.rows() == 0) throw std::invalid_argument("LogisticL2Problem: no samples");
  if (!(lambda_ >= 0.0)) throw std::invalid_argument("LogisticL2Problem: lambda must be >= 0");
  for (Index i = 0; i < b_.size(); ++i) {
    if (b_[i] != 0.0 && b_[i] != 1.0) {
      throw std::invalid_argument("LogisticL2Problem: labels must be 0 or 1");
    }
  }
}

double LogisticL2Problem::evaluate(const DenseVector& x, DenseVector* grad) const {
  return logistic_value_grad(*this, x, grad);
}

double logistic_value_grad(const LogisticL2Problem& problem, const DenseVector& x,
                           DenseVector* grad) {
  if (x.size() != problem.dimension()) {
    throw DimensionMismatch("logistic_value_grad: x has the wrong dimension");
  }
  const DenseVector z = problem.design().multiply(x);
  const DenseVector& b = problem.labels();
  const double inv_n = 1.0 / static_cast<double>(problem.samples());

  double loss = 0.0;
  DenseVector residual(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    loss += softplus(z[i]) - b[i] * z[i];
    residual[i] = sigmoid(z[i]) - b[i];
  }
  const double lambda = problem.lambda();
  if (grad != nullptr) {
    *grad = inv_n * problem.design().multiply_transpose(residual) + lambda * x;
  }
  return inv_n * loss + 0.5 * lambda * x.squaredNorm();
}

std::optional<DenseVector> LogisticL2Problem::hessian_vector(const DenseVector& x,
                                                             const DenseVector& v) const {
  require_same_size(x, v, "LogisticL2Problem::hessian_vector");
  const DenseVector z = A_.multiply(x);
  DenseVector w = A_.multiply(v);
  for (Index i = 0; i < z.size(); ++i) {
    const double s = sigmoid(z[i]);
    w[i] *= s * (1.0 - s);
  }
  return DenseVector(A_.multiply_transpose(w) / static_cast<double>(samples()) + lambda_ * v);
}

std::optional<double> LogisticL2Problem::lipschitz_hint() const {
  return A_.spectral_norm_sq_bound() / (4.0 * static_cast<double>(samples())) + lambda_;
}

// ---------------------------------------------------------------------------
// Smoothed L2-Lp regression

double smooth_abs(double z, double eps) {
  const double a = std::abs(z);
  if (a > eps) return a;
  return z * z / (2.0 * eps) + eps / 2.0;
}

double smooth_abs_derivative(double z, double eps) {
  if (std::abs(z) > eps) return z > 0.0 ? 1.0 : -1.0;
  return z / eps;
}

L2LpProblem::L2LpProblem(SparseMatrix A, DenseVector b, double lambda, double p,
                         double eps_smooth)
    : A_(std::move(A)), b_(std::move(b)), lambda_(lambda), p_(p), eps_(eps_smooth) {
  if (b_.size() != A_.rows()) throw DimensionMismatch("L2LpProblem: rhs length != rows");
  if (!(lambda_ > 0.0)) throw std::invalid_argument("L2LpProblem: lambda must be > 0");
  if (!(p_ > 0.0 && p_ <= 2.0)) throw std::invalid_argument("L2LpProblem: p must lie in (0, 2]");
  if (!(eps_ > 0.0)) throw std::invalid_argument("L2LpProblem: smoothing eps must be > 0");
}

double L2LpProblem::evaluate(const DenseVector& x, DenseVector* grad) const {
  return l2lp_value_grad(*this, x, grad);
}

double l2lp_value_grad(const L2LpProblem& problem, const DenseVector& x, DenseVector* grad) {
  if (x.size() != problem.dimension()) {
    throw DimensionMismatch("l2lp_value_grad: x has the wrong dimension");
  }
  const DenseVector residual = problem.design().multiply(x) - problem.rhs();
  const double lambda = problem.lambda();
  const double p = problem.p();
  const double eps = problem.eps_smooth();

  double penalty = 0.0;
  if (grad != nullptr) *grad = problem.design().multiply_transpose(residual);

  if (p == 2.0) {
    penalty = x.squaredNorm();
    if (grad != nullptr) *grad += 2.0 * lambda * x;
  } else {
    for (Index i = 0; i < x.size(); ++i) {
      const double s = smooth_abs(x[i], eps);
      const double sp = std::pow(s, p);
      penalty += sp;
      if (grad != nullptr) {
        (*grad)[i] += lambda * p * (sp / s) * smooth_abs_derivative(x[i], eps);
      }
    }
  }
  return 0.5 * residual.squaredNorm() + lambda * penalty;
}

std::optional<DenseVector> L2LpProblem::hessian_vector(const DenseVector& x,
                                                       const DenseVector& v) const {
  require_same_size(x, v, "L2LpProblem::hessian_vector");
  DenseVector hv = A_.multiply_transpose(A_.multiply(v));
  if (p_ == 2.0) return DenseVector(hv + 2.0 * lambda_ * v);
  for (Index i = 0; i < x.size(); ++i) {
    const double s = smooth_abs(x[i], eps_);
    const double ds = smooth_abs_derivative(x[i], eps_);
    const double dds = std::abs(x[i]) > eps_ ? 0.0 : 1.0 / eps_;
    const double curv =
        p_ * (p_ - 1.0) * std::pow(s, p_ - 2.0) * ds * ds + p_ * std::pow(s, p_ - 1.0) * dds;
    hv[i] += lambda_ * curv * v[i];
  }
  return hv;
}

std::optional<double> L2LpProblem::lipschitz_hint() const {
  double penalty_curv = 2.0;
  if (p_ != 2.0) {
    // s ∈ [ε/2, ε] on the quadratic piece and s ≥ ε outside it.
    const double half = eps_ / 2.0;
    penalty_curv = p_ * std::abs(p_ - 1.0) * std::pow(half, p_ - 2.0) +
                   p_ * std::max(std::pow(half, p_ - 1.0), std::pow(eps_, p_ - 1.0)) / eps_;
  }
  return A_.spectral_norm_sq_bound() + lambda_ * penalty_curv;
}

// ---------------------------------------------------------------------------
// Dense quadratic

QuadraticProblem::QuadraticProblem(Eigen::MatrixXd Q, DenseVector c)
    : Q_(std::move(Q)), c_(std::move(c)) {
  if (Q_.rows() != Q_.cols() || Q_.rows() != c_.size()) {
    throw DimensionMismatch("QuadraticProblem: Q must be n x n with n = len(c)");
  }
  if (!Q_.isApprox(Q_.transpose(), 1e-12)) {
    throw std::invalid_argument("QuadraticProblem: Q must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q_, Eigen::EigenvaluesOnly);
  lambda_min_ = eig.eigenvalues().minCoeff();
  lambda_max_ = eig.eigenvalues().maxCoeff();
  if (!(lambda_min_ > 0.0)) throw std::invalid_argument("QuadraticProblem: Q must be SPD");
  x_star_ = Q_.llt().solve(c_);
  f_star_ = -0.5 * c_.dot(x_star_);
}

QuadraticProblem QuadraticProblem::diagonal(const DenseVector& d) {
  return QuadraticProblem(d.asDiagonal().toDenseMatrix(), DenseVector::Zero(d.size()));
}

double QuadraticProblem::evaluate(const DenseVector& x, DenseVector* grad) const {
  if (x.size() != c_.size()) throw DimensionMismatch("QuadraticProblem: wrong dimension");
  const DenseVector qx = Q_ * x;
  if (grad != nullptr) *grad = qx - c_;
  return 0.5 * x.dot(qx) - c_.dot(x);
}

std::optional<DenseVector> QuadraticProblem::hessian_vector(const DenseVector& /*x*/,
                                                            const DenseVector& v) const {
  return DenseVector(Q_ * v);
}

}  // namespace aim::problems
