#include "aim/inertia.hpp"

#include <cmath>
#include <string>

namespace aim::inertia {
namespace {

DenseVector normalized_or_sentinel(DenseVector v, double mtol) {
  const double n = v.norm();
  if (!(n >= mtol) || !std::isfinite(n)) return DenseVector::Zero(v.size());
  return v / n;
}

}  // namespace

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::velocity: return "velocity";
    case Kind::acceleration: return "acceleration";
    case Kind::quasi_newton: return "quasi_newton";
    case Kind::hessian_gradient: return "hessian_gradient";
  }
  return "unknown";
}

Kind kind_from_string(std::string_view name) {
  if (name == "velocity" || name == "v") return Kind::velocity;
  if (name == "acceleration" || name == "a") return Kind::acceleration;
  if (name == "quasi_newton" || name == "qn") return Kind::quasi_newton;
  if (name == "hessian_gradient" || name == "hg") return Kind::hessian_gradient;
  throw std::invalid_argument("unknown inertia kind: " + std::string(name));
}

bool is_zero_sentinel(const DenseVector& m) { return m.size() == 0 || m.isZero(0.0); }

DenseVector inertia_velocity(const DenseVector& x_k, const DenseVector& x_prev, double mtol) {
  require_same_size(x_k, x_prev, "inertia_velocity");
  return normalized_or_sentinel(x_k - x_prev, mtol);
}

DenseVector inertia_acceleration(const DenseVector& g_k, const DenseVector& g_prev,
                                 double mtol) {
  require_same_size(g_k, g_prev, "inertia_acceleration");
  return normalized_or_sentinel(g_k - g_prev, mtol);
}

double select_alpha(const DenseVector& s, const DenseVector& y, double c) {
  require_same_size(s, y, "select_alpha");
  if (!(c > 1.0)) throw std::invalid_argument("select_alpha: safeguard c must exceed 1");
  const double sy = s.dot(y);
  if (!(sy > 0.0)) {
    throw CurvatureViolation("select_alpha: s'y = " + std::to_string(sy) + " <= 0");
  }
  return c * s.squaredNorm() / sy;
}

QuasiNewtonInertia inertia_quasi_newton(const DenseVector& s, const DenseVector& y,
                                        double alpha) {
  require_same_size(s, y, "inertia_quasi_newton");
  DenseVector m = alpha * y - s;
  const double msq = m.squaredNorm();
  if (!(msq > 0.0)) throw DegenerateSecant("inertia_quasi_newton: alpha*y - s vanishes");
  const double my = m.dot(y);
  if (!(my > 0.0)) throw DegenerateSecant("inertia_quasi_newton: m'y <= 0");
  const double mu = msq / (alpha * my);
  if (!(mu > 0.0 && mu < 1.0) || !std::isfinite(mu)) {
    throw DegenerateSecant("inertia_quasi_newton: weight " + std::to_string(mu) +
                           " outside (0, 1)");
  }
  return {std::move(m), mu};
}

DenseVector inertia_hessian_gradient(const ObjectiveOracle& oracle, const DenseVector& x,
                                     const DenseVector& g, double eps, double mtol) {
  require_same_size(x, g, "inertia_hessian_gradient");
  if (!(eps > 0.0)) throw std::invalid_argument("inertia_hessian_gradient: eps must be > 0");
  DenseVector g_probe(x.size());
  oracle.evaluate(x - eps * g, &g_probe);
  return normalized_or_sentinel((g - g_probe) / eps, mtol);
}

InertiaTerm compute(const Strategy& strategy, const ObjectiveOracle& oracle, const DenseVector& x,
                    const DenseVector& g, const History& history) {
  InertiaTerm out;
  const auto sentinel = [&] { return DenseVector::Zero(x.size()); };

  switch (strategy.kind) {
    case Kind::velocity:
      out.m = history.present() ? inertia_velocity(x, history.x_prev, strategy.mtol) : sentinel();
      out.mu = strategy.mu;
      break;
    case Kind::acceleration:
      out.m = history.present() ? inertia_acceleration(g, history.g_prev, strategy.mtol)
                                : sentinel();
      out.mu = strategy.mu;
      break;
    case Kind::hessian_gradient:
      out.m = inertia_hessian_gradient(oracle, x, g, strategy.eps_fd, strategy.mtol);
      out.mu = strategy.mu;
      out.extra_grad_evals = 1;
      break;
    case Kind::quasi_newton: {
      out.m = sentinel();
      if (!history.present()) break;
      const DenseVector s = x - history.x_prev;
      const DenseVector y = g - history.g_prev;
      try {
        const double alpha = select_alpha(s, y, strategy.alpha_safeguard);
        auto qn = inertia_quasi_newton(s, y, alpha);
        if (qn.m.norm() >= strategy.mtol) {
          out.m = std::move(qn.m);
          out.mu = qn.mu;
        }
      } catch (const CurvatureViolation&) {
        out.fell_back = true;
      } catch (const DegenerateSecant&) {
        out.fell_back = true;
      }
      break;
    }
  }
  return out;
}

}  // namespace aim::inertia
