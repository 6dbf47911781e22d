#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>

#include "aim/errors.hpp"

namespace aim {

using DenseVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Inertial terms shorter than this are treated as the zero sentinel.
inline constexpr double kDefaultMtol = 1e-8;

void require_same_size(const DenseVector& a, const DenseVector& b, const char* what);
bool all_finite(const DenseVector& v);

/// Evaluation interface for a smooth objective f : Rⁿ → R.
///
/// Implementations must be safe to call concurrently through a const
/// reference; every solver shares one oracle read-only.
class ObjectiveOracle {
 public:
  virtual ~ObjectiveOracle() = default;

  virtual Index dimension() const = 0;

  /// Returns f(x) and, when `grad` is non-null, writes ∇f(x) into it.
  virtual double evaluate(const DenseVector& x, DenseVector* grad) const = 0;

  double value(const DenseVector& x) const { return evaluate(x, nullptr); }
  DenseVector gradient(const DenseVector& x) const;

  /// ∇²f(x) v when the problem provides it analytically.
  virtual std::optional<DenseVector> hessian_vector(const DenseVector& /*x*/,
                                                    const DenseVector& /*v*/) const {
    return std::nullopt;
  }

  /// Upper estimate of the gradient Lipschitz constant D, if known.
  virtual std::optional<double> lipschitz_hint() const { return std::nullopt; }
};

/// Adapts a pair of callables to ObjectiveOracle. Mostly useful in tests.
class FunctionOracle final : public ObjectiveOracle {
 public:
  using ValueFn = std::function<double(const DenseVector&)>;
  using GradFn = std::function<DenseVector(const DenseVector&)>;

  FunctionOracle(Index dim, ValueFn value, GradFn grad,
                 std::optional<double> lipschitz = std::nullopt)
      : dim_(dim), value_(std::move(value)), grad_(std::move(grad)), lipschitz_(lipschitz) {}

  Index dimension() const override { return dim_; }
  double evaluate(const DenseVector& x, DenseVector* grad) const override;
  std::optional<double> lipschitz_hint() const override { return lipschitz_; }

 private:
  Index dim_;
  ValueFn value_;
  GradFn grad_;
  std::optional<double> lipschitz_;
};

/// Rank-one metric M = I + μ/(1−μ) Π_m with inverse M⁻¹ = I − μ Π_m, where
/// Π_m = m mᵀ / ‖m‖² is the orthogonal projector onto span{m}.
///
/// A direction with ‖m‖ < mtol collapses to the identity metric (the zero
/// sentinel). Nothing here ever forms an n×n matrix.
class MetricDescriptor {
 public:
  /// The identity metric.
  MetricDescriptor() = default;

  /// Throws std::invalid_argument unless 0 <= mu < 1.
  MetricDescriptor(DenseVector m, double mu, double mtol = kDefaultMtol);

  static MetricDescriptor identity() { return {}; }

  bool is_identity() const { return m_.size() == 0 || mu_ == 0.0; }
  bool is_sentinel() const { return m_.size() == 0; }
  /// The direction; empty for the zero sentinel.
  const DenseVector& direction() const { return m_; }
  double mu() const { return mu_; }
  double direction_norm_sq() const { return norm_sq_; }

 private:
  DenseVector m_;
  double mu_ = 0.0;
  double norm_sq_ = 0.0;
};

/// Π v = m (mᵀv) / ‖m‖².
DenseVector project_onto(const DenseVector& m, const DenseVector& v);

/// M⁻¹ v = v − μ Π v.
DenseVector apply_metric_inverse(const MetricDescriptor& d, const DenseVector& v);

/// M v = v + μ/(1−μ) Π v.
DenseVector apply_metric(const MetricDescriptor& d, const DenseVector& v);

/// ‖v‖²_M = vᵀ M v = ‖v‖² + μ/(1−μ) (mᵀv)² / ‖m‖².
double mnorm_sq(const MetricDescriptor& d, const DenseVector& v);

}  // namespace aim
