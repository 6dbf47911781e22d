#include "aim/verify.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace aim::verify {

DenseSymmetricMatrix::DenseSymmetricMatrix(Eigen::MatrixXd H) {
  if (H.rows() != H.cols()) throw DimensionMismatch("DenseSymmetricMatrix: not square");
  if (H.rows() == 0) throw DimensionMismatch("DenseSymmetricMatrix: empty");
  if (H.rows() > 64) throw std::invalid_argument("DenseSymmetricMatrix: n > 64");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("DenseSymmetricMatrix: matrix is not symmetric");
  }
  H_ = 0.5 * (H + H.transpose());
}

DenseSymmetricMatrix DenseSymmetricMatrix::diagonal(const DenseVector& d) {
  return DenseSymmetricMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

std::string format(const CheckResult& c) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), " %zu %.17g %.17g %s", c.k, c.lhs, c.rhs,
                c.pass ? "PASS" : "FAIL");
  return c.name + buf;
}

void write_report(std::ostream& out, const std::vector<CheckResult>& results) {
  for (const auto& c : results) out << format(c) << '\n';
}

bool all_pass(const std::vector<CheckResult>& results) {
  return first_failure(results) == results.size();
}

std::size_t first_failure(const std::vector<CheckResult>& results) {
  const auto it = std::find_if(results.begin(), results.end(),
                               [](const CheckResult& c) { return !c.pass; });
  return static_cast<std::size_t>(it - results.begin());
}

int q_eta(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("q_eta: eta must lie in (0, 1)");
  // (1 − 2η) + 2j(1 − η) >= 0  ⇔  j >= (2η − 1) / (2(1 − η)). The slack
  // absorbs rounding in the quotient, e.g. η = 0.9 gives 4.000000000000001.
  const double bound = (2.0 * eta - 1.0) / (2.0 * (1.0 - eta));
  if (bound <= 0.0) return 0;
  return static_cast<int>(std::ceil(bound - 1e-9 * std::max(1.0, bound)));
}

namespace {

const IterRecord& next_of(const RunTrace& trace, std::size_t i) {
  if (i + 1 >= trace.records.size()) {
    throw MissingTraceData("trace ends on a step record without its successor");
  }
  return trace.records[i + 1];
}

void require_iterates(const RunTrace& trace, const char* what) {
  for (const auto& rec : trace.records) {
    if (rec.x.size() == 0) throw MissingTraceData(std::string(what) + ": iterates not recorded");
  }
}

}  // namespace

std::vector<CheckResult> check_descent(const RunTrace& trace, double eta, double rel_tol) {
  std::vector<CheckResult> out;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& rec = trace.records[i];
    if (!rec.has_step) continue;
    if (!std::isfinite(rec.step_mnorm_sq) || !(rec.beta > 0.0)) {
      throw MissingTraceData("check_descent: step " + std::to_string(rec.k) +
                             " has no metric data");
    }
    const auto& nxt = next_of(trace, i);
    const double rhs = rec.f - (1.0 - eta) / rec.beta * rec.step_mnorm_sq;
    const double tol = rel_tol * (1.0 + std::abs(rec.f));
    out.push_back({"descent", rec.k, nxt.f, rhs, nxt.f <= rhs + tol});
  }
  return out;
}

std::vector<CheckResult> check_acceptance(const RunTrace& trace, double eta, double tol) {
  std::vector<CheckResult> out;
  for (const auto& rec : trace.records) {
    if (!rec.has_step) continue;
    out.push_back({"acceptance", rec.k, rec.r, eta, rec.r <= eta + tol});
  }
  return out;
}

std::vector<CheckResult> check_contraction(const RunTrace& trace, const DenseVector& x_star,
                                           double eta, double tol) {
  if (eta > 0.5) throw std::invalid_argument("check_contraction: needs eta <= 0.5");
  if (x_star.size() == 0) throw std::invalid_argument("check_contraction: x_star missing");
  require_iterates(trace, "check_contraction");
  std::vector<CheckResult> out;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& rec = trace.records[i];
    if (!rec.has_step) continue;
    const auto& nxt = next_of(trace, i);
    require_same_size(rec.x, x_star, "check_contraction");
    const MetricDescriptor M = rec.metric();
    const double before = std::sqrt(mnorm_sq(M, rec.x - x_star));
    const double after = std::sqrt(mnorm_sq(M, nxt.x - x_star));
    out.push_back({"contraction", rec.k, after, before,
                   after <= before + tol * (1.0 + before)});
  }
  return out;
}

std::vector<RateBoundReport> check_rate_bound(const RunTrace& trace, const DenseVector& x_star,
                                              double f_star, double beta, double eta,
                                              double tol) {
  if (trace.adaptive_beta) {
    throw std::invalid_argument("check_rate_bound: requires a constant step size run");
  }
  if (!(beta > 0.0)) throw std::invalid_argument("check_rate_bound: beta must be positive");
  require_iterates(trace, "check_rate_bound");
  const int q = q_eta(eta);

  // Runs shorter than q steps contribute the terms they have.
  double C = 0.0;
  for (int j = 1; j <= q - 1; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    if (idx >= trace.records.size() || !trace.records[idx].has_step) break;
    const double coeff = (1.0 - 2.0 * eta) + 2.0 * j * (1.0 - eta);
    C -= coeff * trace.records[idx].step_mnorm_sq;
  }

  const DenseVector e0 = trace.records.front().x - x_star;
  std::vector<RateBoundReport> out;
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    const auto& rec = trace.records[i];
    const MetricDescriptor M = trace.records[i - 1].metric();
    RateBoundReport rep;
    rep.k = rec.k;
    rep.lhs = rec.f - f_star;
    rep.C = C;
    rep.q_eta = q;
    rep.rhs = (mnorm_sq(M, e0) + C) / (2.0 * static_cast<double>(rec.k) * beta);
    rep.satisfied = rep.lhs <= rep.rhs + tol * (1.0 + std::abs(rep.rhs));
    out.push_back(rep);
  }
  return out;
}

double check_secant(const DenseVector& m, double mu, const DenseVector& s, const DenseVector& y,
                    double alpha) {
  require_same_size(m, s, "check_secant");
  require_same_size(s, y, "check_secant");
  const DenseVector ay = alpha * y;
  const double denom = ay.norm();
  if (!(denom > 0.0)) throw std::invalid_argument("check_secant: alpha*y is zero");
  const MetricDescriptor M(m, mu, 0.0);
  return (apply_metric(M, s) - ay).norm() / denom;
}

double rayleigh_r(const DenseVector& g, const DenseSymmetricMatrix& H) {
  if (g.size() != H.size()) throw DimensionMismatch("rayleigh_r: size mismatch");
  const DenseVector Hg = H.matrix() * g;
  const double den = g.dot(Hg);
  if (den == 0.0 || !std::isfinite(den)) throw UndefinedRatio("rayleigh_r: gᵀHg = 0");
  return Hg.squaredNorm() / den;
}

DenseVector regularized_newton_step(const DenseSymmetricMatrix& H, const DenseVector& g,
                                    double theta) {
  if (g.size() != H.size()) throw DimensionMismatch("regularized_newton_step: size mismatch");
  if (!(theta > 0.0)) throw std::invalid_argument("regularized_newton_step: theta must be > 0");
  Eigen::MatrixXd A = H.matrix();
  A.diagonal().array() += theta;
  const Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) {
    throw SingularSystem("regularized_newton_step: theta*I + H is not positive definite");
  }
  DenseVector d = llt.solve(g);
  d += llt.solve(DenseVector(g - A * d));
  return d;
}

double check_reg_newton_equiv_rank1(const DenseVector& h, const DenseVector& g, double theta) {
  require_same_size(h, g, "check_reg_newton_equiv_rank1");
  if (!(theta > 0.0)) throw std::invalid_argument("check_reg_newton_equiv_rank1: theta <= 0");
  const double hg = h.dot(g);
  if (std::abs(hg) <= 1e-14 * h.norm() * g.norm()) {
    throw UndefinedRatio("check_reg_newton_equiv_rank1: g is orthogonal to h");
  }
  const DenseSymmetricMatrix H(Eigen::MatrixXd(h * h.transpose()));
  const double r = rayleigh_r(g, H);
  const double beta = 1.0 / theta;
  const double mu = 1.0 / (1.0 + theta / r);
  const DenseVector m = H.matrix() * g;

  const DenseVector aim = beta * apply_metric_inverse(MetricDescriptor(m, mu, 0.0), g);
  const DenseVector ref = regularized_newton_step(H, g, theta);
  return (aim - ref).norm() / ref.norm();
}

DenseVector char_poly(const DenseSymmetricMatrix& H) {
  const Index n = H.size();
  const Eigen::MatrixXd& A = H.matrix();
  DenseVector c(n + 1);  // c[i] multiplies tⁱ; c[n] = 1
  c[n] = 1.0;
  Eigen::MatrixXd Mk = Eigen::MatrixXd::Zero(n, n);
  for (Index k = 1; k <= n; ++k) {
    Mk = A * Mk;
    Mk.diagonal().array() += c[n - k + 1];
    c[n - k] = -(A * Mk).trace() / static_cast<double>(k);
  }
  return c.head(n);
}

Theorem33Coeffs theorem33_coeffs(const DenseVector& a, double theta) {
  const Index n = a.size();
  if (n < 2) throw std::invalid_argument("theorem33_coeffs: needs n >= 2");
  if (!(theta > 0.0)) throw std::invalid_argument("theorem33_coeffs: theta must be > 0");

  Theorem33Coeffs out;
  out.b = DenseVector::Zero(n);
  out.b[n - 1] = 1.0;
  for (Index i = n - 2; i >= 1; --i) out.b[i] = a[i + 1] - theta * out.b[i + 1];
  out.b[0] = 0.0;

  out.r_over_mu = theta * out.b[1] - a[1];
  const double scale = std::abs(theta * out.b[1]) + std::abs(a[1]);
  if (!std::isfinite(out.r_over_mu) || std::abs(out.r_over_mu) <= 1e-14 * scale) {
    throw SingularSystem("theorem33_coeffs: theta*b1 - a1 vanishes");
  }
  out.beta = 1.0 / (theta + a[0] / out.r_over_mu);
  if (!std::isfinite(out.beta) || !(out.beta > 0.0)) {
    throw SingularSystem("theorem33_coeffs: step size is not positive");
  }
  out.positive_split = out.r_over_mu > 0.0;
  return out;
}

double check_theorem33_equiv(const DenseSymmetricMatrix& H, const DenseVector& g, double theta) {
  const Index n = H.size();
  if (n > 16) throw std::invalid_argument("check_theorem33_equiv: n > 16");
  if (g.size() != n) throw DimensionMismatch("check_theorem33_equiv: size mismatch");
  const Theorem33Coeffs c = theorem33_coeffs(char_poly(H), theta);
  const Eigen::MatrixXd& A = H.matrix();

  // Horner: q(H)g = H(b_1 g + H(b_2 g + … + H b_{n−1} g)).
  DenseVector v = c.b[n - 1] * g;
  for (Index i = n - 2; i >= 1; --i) v = A * v + c.b[i] * g;
  v = A * v;

  const DenseVector aim = c.beta * (g - v / c.r_over_mu);
  const DenseVector ref = regularized_newton_step(H, g, theta);
  return (aim - ref).norm() / ref.norm();
}

double grad_check(const ObjectiveOracle& oracle, const DenseVector& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("grad_check: h must be positive");
  const DenseVector g = oracle.gradient(x);
  DenseVector fd(x.size());
  DenseVector xp = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    xp[i] = xi + h;
    const double fp = oracle.value(xp);
    xp[i] = xi - h;
    const double fm = oracle.value(xp);
    xp[i] = xi;
    fd[i] = (fp - fm) / (2.0 * h);
  }
  const double scale = std::max(fd.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  return (g - fd).cwiseAbs().maxCoeff() / scale;
}

}  // namespace aim::verify
