#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "aim/core.hpp"
#include "aim/solver.hpp"

// Numerical certificates for AIM traces and for the small dense identities
// linking AIM to regularized Newton steps.
namespace aim::verify {

/// Small (n <= 64) symmetric matrix. Construction rejects asymmetry above
/// 1e-12 relative to the largest entry and stores the symmetrized matrix.
class DenseSymmetricMatrix {
 public:
  explicit DenseSymmetricMatrix(Eigen::MatrixXd H);
  static DenseSymmetricMatrix diagonal(const DenseVector& d);

  Index size() const { return H_.rows(); }
  const Eigen::MatrixXd& matrix() const { return H_; }

 private:
  Eigen::MatrixXd H_;
};

/// One line of a verification report.
struct CheckResult {
  std::string name;
  std::size_t k = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = true;
};

/// "name k lhs rhs PASS|FAIL"
std::string format(const CheckResult& c);
void write_report(std::ostream& out, const std::vector<CheckResult>& results);
bool all_pass(const std::vector<CheckResult>& results);
/// Index into `results` of the first failure, or results.size().
std::size_t first_failure(const std::vector<CheckResult>& results);

/// Smallest j >= 0 with (1 − 2η) + 2j(1 − η) >= 0. Throws
/// std::invalid_argument unless 0 < η < 1.
int q_eta(double eta);

/// f(x^{k+1}) <= f(x^k) − ((1 − η)/β_k)‖x^k − x^{k+1}‖²_{M_k} + tol with
/// tol = rel_tol·(1 + |f(x^k)|), one result per accepted step. Throws
/// MissingTraceData when a step record lacks its M-norm.
std::vector<CheckResult> check_descent(const RunTrace& trace, double eta,
                                       double rel_tol = 1e-10);

/// r_k <= η + tol for every accepted step.
std::vector<CheckResult> check_acceptance(const RunTrace& trace, double eta, double tol = 1e-12);

/// ‖x^{k+1} − x*‖_{M_k} <= ‖x^k − x*‖_{M_k} + tol per step. Requires η <= 0.5
/// and iterates stored in the trace.
std::vector<CheckResult> check_contraction(const RunTrace& trace, const DenseVector& x_star,
                                           double eta, double tol = 1e-10);

struct RateBoundReport {
  std::size_t k = 0;
  double lhs = 0.0;  // f(x^k) − f*
  double rhs = 0.0;  // (‖x⁰ − x*‖²_M + C) / (2kβ)
  double C = 0.0;
  int q_eta = 0;
  bool satisfied = false;
};

/// O(1/k) bound for a constant-β run, checked for every k >= 1.
///
/// C = −Σ_{j=1}^{q(η)−1} [(1 − 2η) + 2j(1 − η)]‖x^j − x^{j+1}‖²_{M_j}, each
/// term in the metric of its own step. ‖x⁰ − x*‖²_M at index k uses the
/// metric of the step that produced x^k. Throws std::invalid_argument for an
/// adaptive-β trace; MissingTraceData when iterates were not kept.
std::vector<RateBoundReport> check_rate_bound(const RunTrace& trace, const DenseVector& x_star,
                                              double f_star, double beta, double eta,
                                              double tol = 1e-10);

/// ‖M s − αy‖ / ‖αy‖ with M from (m, μ). Throws std::invalid_argument when
/// αy = 0.
double check_secant(const DenseVector& m, double mu, const DenseVector& s, const DenseVector& y,
                    double alpha);

/// gᵀH²g / gᵀHg. Throws UndefinedRatio when gᵀHg = 0.
double rayleigh_r(const DenseVector& g, const DenseSymmetricMatrix& H);

/// Solves (θI + H)d = g by Cholesky with one refinement sweep. Throws
/// SingularSystem when θI + H is not positive definite.
DenseVector regularized_newton_step(const DenseSymmetricMatrix& H, const DenseVector& g,
                                    double theta);

/// H = hhᵀ. AIM step with m = Hg, β = 1/θ, μ = 1/(1 + θ/r) against the
/// regularized Newton step; returns the relative difference. Throws
/// UndefinedRatio when g ⟂ h.
double check_reg_newton_equiv_rank1(const DenseVector& h, const DenseVector& g, double theta);

/// Coefficients a_0..a_{n−1} of det(tI − H) = tⁿ + a_{n−1}tⁿ⁻¹ + … + a_0
/// (Faddeev–LeVerrier).
DenseVector char_poly(const DenseSymmetricMatrix& H);

struct Theorem33Coeffs {
  DenseVector b;           // b_0..b_{n−1}, b_0 = 0, b_{n−1} = 1
  double beta = 0.0;       // 1 / (θ + a_0 / (θ b_1 − a_1))
  double r_over_mu = 0.0;  // θ b_1 − a_1
  /// r/μ > 0, so a split with r > 0 and μ ∈ (0, 1) is possible. The step
  /// identity itself only needs r/μ ≠ 0; it is negative for odd n with
  /// positive definite H.
  bool positive_split = false;
};

/// Throws std::invalid_argument for n < 2 or θ <= 0, and SingularSystem
/// when θ b_1 − a_1 vanishes or β is not a positive finite number.
Theorem33Coeffs theorem33_coeffs(const DenseVector& a, double theta);

/// β(g − (μ/r) q(H) g) with q(H) = Σ b_i Hⁱ against (θI + H)⁻¹g; returns
/// the relative difference. Requires n <= 16.
double check_theorem33_equiv(const DenseSymmetricMatrix& H, const DenseVector& g, double theta);

/// max_i |∇f(x)_i − fd_i| / max(‖fd‖_∞, tiny) with central differences of
/// half-width h.
double grad_check(const ObjectiveOracle& oracle, const DenseVector& x, double h = 1e-6);

}  // namespace aim::verify
