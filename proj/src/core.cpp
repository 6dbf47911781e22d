#include "aim/core.hpp"

#include <cmath>
#include <string>

namespace aim {

void require_same_size(const DenseVector& a, const DenseVector& b, const char* what) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(std::string(what) + ": size " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  }
}

bool all_finite(const DenseVector& v) { return v.allFinite(); }

DenseVector ObjectiveOracle::gradient(const DenseVector& x) const {
  DenseVector g(dimension());
  evaluate(x, &g);
  return g;
}

double FunctionOracle::evaluate(const DenseVector& x, DenseVector* grad) const {
  if (x.size() != dim_) throw DimensionMismatch("FunctionOracle: wrong point dimension");
  if (grad != nullptr) *grad = grad_(x);
  return value_(x);
}

MetricDescriptor::MetricDescriptor(DenseVector m, double mu, double mtol) : mu_(mu) {
  if (!(mu >= 0.0 && mu < 1.0)) {
    throw std::invalid_argument("MetricDescriptor: mu must lie in [0, 1), got " +
                                std::to_string(mu));
  }
  const double nsq = m.squaredNorm();
  if (!(nsq > 0.0) || std::sqrt(nsq) < mtol) {
    mu_ = 0.0;
    return;
  }
  m_ = std::move(m);
  norm_sq_ = nsq;
}

DenseVector project_onto(const DenseVector& m, const DenseVector& v) {
  require_same_size(m, v, "project_onto");
  const double nsq = m.squaredNorm();
  if (!(nsq > 0.0)) throw ZeroDirection("project_onto: zero direction");
  return m * (m.dot(v) / nsq);
}

DenseVector apply_metric_inverse(const MetricDescriptor& d, const DenseVector& v) {
  if (d.is_identity()) return v;
  const DenseVector& m = d.direction();
  require_same_size(m, v, "apply_metric_inverse");
  return v - (d.mu() * m.dot(v) / d.direction_norm_sq()) * m;
}

DenseVector apply_metric(const MetricDescriptor& d, const DenseVector& v) {
  if (d.is_identity()) return v;
  const DenseVector& m = d.direction();
  require_same_size(m, v, "apply_metric");
  const double w = d.mu() / (1.0 - d.mu());
  return v + (w * m.dot(v) / d.direction_norm_sq()) * m;
}

double mnorm_sq(const MetricDescriptor& d, const DenseVector& v) {
  if (d.is_identity()) return v.squaredNorm();
  const DenseVector& m = d.direction();
  require_same_size(m, v, "mnorm_sq");
  const double w = d.mu() / (1.0 - d.mu());
  const double mv = m.dot(v);
  return v.squaredNorm() + w * mv * mv / d.direction_norm_sq();
}

}  // namespace aim
