#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <limits>

#include "aim/baselines.hpp"
#include "aim/problems/objectives.hpp"
#include "aim/problems/synthetic.hpp"
#include "test_support.hpp"

namespace aim::baselines {
namespace {

using aim::testing::Draw;

DenseVector vec(std::initializer_list<double> xs) {
  DenseVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

FunctionOracle half_sq(Index n) {
  return FunctionOracle(
      n, [](const DenseVector& x) { return 0.5 * x.squaredNorm(); },
      [](const DenseVector& x) -> DenseVector { return x; }, 1.0);
}

BaselineConfig with(Method method, double beta) {
  BaselineConfig c;
  c.method = method;
  c.beta = beta;
  return c;
}

TEST(MethodNames, RoundTrip) {
  for (Method m : {Method::gd, Method::hb, Method::nag, Method::adagrad, Method::adam}) {
    EXPECT_EQ(method_from_string(to_string(m)), m);
  }
  EXPECT_THROW(method_from_string("drsom"), ConfigError);
}

TEST(BaselineConfig, ValidateRejectsOutOfRange) {
  auto bad = with(Method::hb, 0.1);
  bad.gamma = 1.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  auto adam = with(Method::adam, 0.1);
  adam.alpha1 = 1.0;
  EXPECT_THROW(adam.validate(), ConfigError);
  EXPECT_THROW(with(Method::gd, 0.0).validate(), ConfigError);
}

TEST(GradientDescent, UnitStepSolvesUnitQuadraticInOneStep) {
  const RunTrace t = solve_gd(half_sq(1), vec({1}), with(Method::gd, 1.0));
  EXPECT_EQ(t.status, RunStatus::converged);
  EXPECT_EQ(t.iterations(), 1u);
  EXPECT_EQ(t.final_record().x[0], 0.0);
}

TEST(GradientDescent, OverlongStepContractsByHalf) {
  auto c = with(Method::gd, 1.5);
  c.max_iters = 10;
  const RunTrace t = solve_gd(half_sq(1), vec({1}), c);
  for (std::size_t k = 0; k + 1 < t.records.size(); ++k) {
    EXPECT_DOUBLE_EQ(t.records[k + 1].x[0], -0.5 * t.records[k].x[0]);
  }
}

TEST(GradientDescent, StartAtMinimumTakesNoSteps) {
  const RunTrace t = solve_gd(half_sq(2), vec({0, 0}), with(Method::gd, 0.1));
  EXPECT_EQ(t.status, RunStatus::converged);
  EXPECT_EQ(t.iterations(), 0u);
}

TEST(GradientDescent, DivergenceIsDetected) {
  const RunTrace t = solve_gd(half_sq(1), vec({1}), with(Method::gd, 3.0));
  EXPECT_EQ(t.status, RunStatus::error);
  EXPECT_EQ(t.iterations(), 10u);
}

TEST(HeavyBall, ZeroMomentumIsBitIdenticalToGd) {
  problems::SyntheticSpec spec;
  spec.m = 40;
  spec.n = 20;
  spec.seed = 3;
  auto data = problems::generate_synthetic(spec);
  const problems::L2LpProblem prob(data.A, data.b, data.lambda, 1.0, 0.1);
  const double beta = 1.0 / *prob.lipschitz_hint();
  auto hb = with(Method::hb, beta);
  hb.gamma = 0.0;
  hb.max_iters = 200;
  auto gd = with(Method::gd, beta);
  gd.max_iters = 200;
  const RunTrace a = solve_heavy_ball(prob, DenseVector::Zero(20), hb);
  const RunTrace b = solve_gd(prob, DenseVector::Zero(20), gd);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].x, b.records[i].x);
    EXPECT_EQ(a.records[i].f, b.records[i].f);
    EXPECT_EQ(a.records[i].grad_norm, b.records[i].grad_norm);
  }
  EXPECT_EQ(a.status, b.status);
}

TEST(HeavyBall, TwoStepHandRecurrence) {
  auto c = with(Method::hb, 0.5);
  c.gamma = 0.5;
  const RunTrace t = solve_heavy_ball(half_sq(1), vec({1}), c);
  ASSERT_GE(t.records.size(), 3u);
  EXPECT_DOUBLE_EQ(t.records[1].x[0], 0.5);
  EXPECT_DOUBLE_EQ(t.records[2].x[0], 0.0);
  EXPECT_EQ(t.records[0].gamma, 0.0);  // first step carries no momentum
  EXPECT_EQ(t.status, RunStatus::converged);
  EXPECT_EQ(t.iterations(), 2u);
}

TEST(HeavyBall, StepAboveBoundIsRejected) {
  auto c = with(Method::hb, 0.2);
  c.gamma = 0.9;  // bound (1 − 0.9)/1 = 0.1
  EXPECT_THROW(solve_heavy_ball(half_sq(2), vec({1, 1}), c), ConfigError);
}

// Per eigenvalue λ the iteration matrix is [[1 + γ − βλ, −γ], [1, 0]].
double hb_spectral_radius(double beta, double gamma, const DenseVector& lambdas) {
  double rho = 0.0;
  for (Index i = 0; i < lambdas.size(); ++i) {
    Eigen::Matrix2d T;
    T << 1.0 + gamma - beta * lambdas[i], -gamma, 1.0, 0.0;
    const auto ev = T.eigenvalues();
    rho = std::max({rho, std::abs(ev[0]), std::abs(ev[1])});
  }
  return rho;
}

TEST(HeavyBall, StepAtBoundContractsOnQuadratics) {
  const DenseVector d = vec({4.0, 2.5, 1.0, 0.3, 0.05});
  const auto q = problems::QuadraticProblem::diagonal(d);
  const double gamma = 0.9, beta = (1.0 - gamma) / d.maxCoeff();
  ASSERT_LT(hb_spectral_radius(beta, gamma, d), 1.0);

  auto c = with(Method::hb, beta);
  c.gamma = gamma;
  c.max_iters = 20000;
  const RunTrace t = solve_heavy_ball(q, DenseVector::Ones(5), c);
  ASSERT_EQ(t.status, RunStatus::converged);
  // Envelope: the largest distance from any later iterate never grows.
  std::vector<double> env(t.records.size());
  double running = 0.0;
  for (std::size_t i = t.records.size(); i-- > 0;) {
    running = std::max(running, t.records[i].x.norm());
    env[i] = running;
  }
  for (std::size_t i = 1; i < env.size(); ++i) EXPECT_LE(env[i], env[i - 1]);
  // Converged at ‖g‖ ≤ gtol, so ‖x‖ ≤ gtol/λmin.
  EXPECT_LE(env.back(), c.gtol / d.minCoeff());
}

TEST(Nag, ThetaRecursion) {
  EXPECT_NEAR(nag_theta(1.0, 1.0, 1.0), (std::sqrt(5.0) - 1.0) / 2.0, 1e-15);
  double theta = 1.0;
  for (int k = 1; k < 50; ++k) {
    const double next = nag_theta(0.3, 0.3, theta);
    EXPECT_NEAR((1.0 - next) / (next * next), 1.0 / (theta * theta), 1e-9 / (theta * theta));
    EXPECT_GT(next, 0.0);
    EXPECT_LT(next, 1.0);
    theta = next;
  }
}

TEST(Nag, UnitQuadraticNeedsNoBacktracking) {
  BaselineConfig c = with(Method::nag, 1.0);
  const RunTrace t = solve_nag(half_sq(3), vec({1, -2, 3}), c);
  EXPECT_EQ(t.status, RunStatus::converged);
  EXPECT_EQ(t.total_rejections, 0u);
  EXPECT_EQ(t.iterations(), 1u);
  EXPECT_EQ(t.records[0].r, 1.0);  // θ₀
  EXPECT_EQ(t.records[0].gamma, 0.0);
}

TEST(Nag, AcceptedStepsSatisfySufficientDecrease) {
  problems::SyntheticSpec spec;
  spec.m = 150;
  spec.n = 40;
  spec.density = 0.3;
  spec.seed = 4;
  auto data = problems::generate_synthetic_classification(spec);
  const problems::LogisticL2Problem prob(data.A, data.labels, 1e-3);
  const RunTrace t = solve_nag(prob, DenseVector::Zero(40), with(Method::nag, 100.0));
  EXPECT_EQ(t.status, RunStatus::converged);
  EXPECT_GT(t.total_rejections, 0u);
  ASSERT_GE(t.records.size(), 3u);
  EXPECT_NEAR(t.records[1].r,
              nag_theta(t.records[1].beta, t.records[0].beta, 1.0), 1e-15);
  for (std::size_t k = 0; k + 1 < t.records.size(); ++k) {
    const auto& rec = t.records[k];
    const DenseVector& xk = rec.x;
    const DenseVector xprev = k == 0 ? xk : t.records[k - 1].x;
    const DenseVector x_tilde = xk + rec.gamma * (xk - xprev);
    DenseVector g_tilde(40);
    const double f_tilde = prob.evaluate(x_tilde, &g_tilde);
    EXPECT_LE(t.records[k + 1].f, f_tilde - 0.5 * rec.beta * g_tilde.squaredNorm()) << "k=" << k;
  }
}

TEST(Nag, HalvingCapEndsInError) {
  FunctionOracle f(
      1,
      [](const DenseVector& x) {
        return x[0] == 0.0 ? 0.5 : std::numeric_limits<double>::quiet_NaN();
      },
      [](const DenseVector& x) -> DenseVector { return DenseVector::Ones(x.size()); });
  // Starting at zero keeps every trial point x = -β distinct from x0 down to β = 2^-61.
  const RunTrace t = solve_nag(f, vec({0}), with(Method::nag, 1.0));
  EXPECT_EQ(t.status, RunStatus::error);
  EXPECT_EQ(t.total_rejections, 61u);
}

TEST(AdaGrad, FirstStepClosedForm) {
  MomentState state;
  const DenseVector g = vec({3.0, -1e3, 1e-6});
  const DenseVector step = adagrad_update(state, g, 0.1, 1e-8);
  for (Index i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(step[i], 0.1 * g[i] / std::sqrt(g[i] * g[i] + 1e-8));
  }
  EXPECT_NEAR(step[0], 0.1, 1e-9);
  EXPECT_NEAR(step[1], -0.1, 1e-12);
}

TEST(AdaGrad, AccumulatorIsNonDecreasing) {
  Draw draw(41);
  MomentState state;
  DenseVector prev = DenseVector::Zero(6);
  for (int k = 0; k < 100; ++k) {
    adagrad_update(state, draw.vector(6), 0.1, 1e-8);
    EXPECT_TRUE((state.h.array() >= prev.array()).all());
    prev = state.h;
  }
}

TEST(AdaGrad, ZeroGradientCoordinateNeverMoves) {
  const auto q = problems::QuadraticProblem::diagonal(vec({1.0, 2.0, 3.0}));
  auto c = with(Method::adagrad, 0.5);
  c.max_iters = 300;
  const RunTrace t = solve_adagrad(q, vec({1.0, 0.0, -2.0}), c);
  for (const auto& rec : t.records) EXPECT_EQ(rec.x[1], 0.0);
  EXPECT_EQ(t.status, RunStatus::converged);
}

TEST(Adam, NoAveragingGivesSignLikeStep) {
  MomentState state;
  const DenseVector g = vec({2.0, -0.5});
  const DenseVector step = adam_update(state, g, 0.1, 0.0, 0.0, 1e-8);
  for (Index i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(step[i], 0.1 * g[i] / std::sqrt(g[i] * g[i] + 1e-8));
  }
}

TEST(Adam, ZeroInitialisedFirstMoment) {
  MomentState state;
  const DenseVector g = vec({2.0, -0.5});
  adam_update(state, g, 0.1, 0.9, 0.999, 1e-8);
  EXPECT_DOUBLE_EQ(state.g_avg[0], 0.1 * 2.0);
  EXPECT_DOUBLE_EQ(state.h[1], 0.001 * 0.25);
}

TEST(Adam, ConstantGradientLimit) {
  MomentState state;
  const DenseVector g = vec({2.0, -0.5, 1e-3});
  DenseVector step;
  for (int k = 0; k < 40000; ++k) step = adam_update(state, g, 0.1, 0.9, 0.999, 1e-8);
  for (Index i = 0; i < 3; ++i) {
    EXPECT_NEAR(state.g_avg[i], g[i], 1e-12);
    EXPECT_NEAR(state.h[i], g[i] * g[i], 1e-12);
    EXPECT_NEAR(step[i], 0.1 * g[i] / std::sqrt(g[i] * g[i] + 1e-8), 1e-9);
    EXPECT_GE(state.h[i], 0.0);
  }
}

TEST(Dispatch, EveryMethodStopsOnSharedRule) {
  const auto q = problems::QuadraticProblem::diagonal(vec({1.0, 0.5}));
  for (Method m : {Method::gd, Method::hb, Method::nag, Method::adagrad, Method::adam}) {
    auto c = with(m, m == Method::hb ? 0.1 : (m == Method::adam || m == Method::adagrad ? 0.05 : 1.0));
    c.max_iters = 50000;
    const RunTrace t = solve(q, vec({1.0, -1.0}), c);
    EXPECT_EQ(t.solver, to_string(m));
    ASSERT_EQ(t.status, RunStatus::converged) << to_string(m) << ": " << t.message;
    EXPECT_LE(t.final_record().grad_norm, c.gtol);
    EXPECT_GT(t.records[t.records.size() - 2].grad_norm, c.gtol);
  }
}

}  // namespace
}  // namespace aim::baselines
