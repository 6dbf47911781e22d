#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <functional>

#include "aim/problems/objectives.hpp"
#include "aim/problems/sparse_matrix.hpp"
#include "aim/problems/synthetic.hpp"
#include "test_support.hpp"

namespace aim::problems {
namespace {

using aim::testing::Draw;

DenseVector vec(std::initializer_list<double> xs) {
  DenseVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Eigen::MatrixXd dense(const SparseMatrix& A) { return Eigen::MatrixXd(A.storage()); }

/// Central differences with h = 1e-6·(1 + ‖x‖); max error over ‖fd‖_∞.
double fd_rel_error(const ObjectiveOracle& f, const DenseVector& x) {
  const double h = 1e-6 * (1.0 + x.norm());
  DenseVector fd(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    DenseVector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    fd[i] = (f.value(xp) - f.value(xm)) / (2.0 * h);
  }
  return (f.gradient(x) - fd).cwiseAbs().maxCoeff() / std::max(fd.cwiseAbs().maxCoeff(), 1e-300);
}

SyntheticSpec small_spec(std::uint64_t seed, Index m = 60, Index n = 25, double r = 0.3) {
  SyntheticSpec s;
  s.m = m;
  s.n = n;
  s.density = r;
  s.seed = seed;
  return s;
}

TEST(SparseMatrix, ProductsMatchDense) {
  Draw draw(51);
  std::vector<Triplet> t;
  for (Index i = 0; i < 7; ++i)
    for (Index j = 0; j < 5; ++j)
      if (draw.uniform() < 0.4) t.push_back({i, j, draw.normal()});
  const auto A = SparseMatrix::from_triplets(7, 5, t);
  const Eigen::MatrixXd D = dense(A);
  const DenseVector x = draw.vector(5), y = draw.vector(7);
  EXPECT_LE((A.multiply(x) - D * x).norm(), 1e-14);
  EXPECT_LE((A.multiply_transpose(y) - D.transpose() * y).norm(), 1e-14);
  const double spec = Eigen::JacobiSVD<Eigen::MatrixXd>(D).singularValues()[0];
  EXPECT_GE(A.spectral_norm_sq_bound(), spec * spec * (1.0 - 1e-12));
  EXPECT_EQ(static_cast<std::size_t>(A.nonzeros()), t.size());
}

TEST(SparseMatrix, RejectsBadTriplets) {
  EXPECT_THROW(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), std::out_of_range);
  EXPECT_THROW(SparseMatrix::from_triplets(2, 2, {{0, -1, 1.0}}), std::out_of_range);
  EXPECT_THROW(SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {0, 1, 2.0}}),
               std::invalid_argument);
}

TEST(Sigmoid, StableAtExtremes) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(sigmoid(800.0), 1.0, 0.0);
  EXPECT_GE(sigmoid(-800.0), 0.0);
  EXPECT_DOUBLE_EQ(sigmoid(3.0) + sigmoid(-3.0), 1.0);
}

TEST(Logistic, ValueAtOriginIsLogTwo) {
  for (double lambda : {0.0, 1e-3, 10.0}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      auto d = generate_synthetic_classification(small_spec(seed));
      const LogisticL2Problem p(d.A, d.labels, lambda);
      EXPECT_NEAR(p.value(DenseVector::Zero(25)), std::log(2.0), 1e-12);
    }
  }
}

TEST(Logistic, GradientAtOrigin) {
  auto d = generate_synthetic_classification(small_spec(4));
  const LogisticL2Problem p(d.A, d.labels, 0.5);
  const DenseVector expect =
      dense(d.A).transpose() * (DenseVector::Constant(60, 0.5) - d.labels) / 60.0;
  EXPECT_LE((p.gradient(DenseVector::Zero(25)) - expect).norm(), 1e-14);
}

TEST(Logistic, SingleSampleValue) {
  const auto A = SparseMatrix::from_triplets(1, 1, {{0, 0, 1.0}});
  const double lambda = 0.01;
  const LogisticL2Problem p(A, vec({1.0}), lambda);
  const double expect = std::log1p(std::exp(-10.0)) + lambda * 50.0;
  EXPECT_NEAR(p.value(vec({10.0})), expect, 1e-15);
  EXPECT_NEAR(std::log1p(std::exp(-10.0)), 4.54e-5, 1e-7);
  EXPECT_LE(fd_rel_error(p, vec({10.0})), 1e-6);
}

TEST(Logistic, MatchesNaiveFormulaAndStaysFiniteForHugeMargins) {
  auto d = generate_synthetic_classification(small_spec(5));
  const double lambda = 1e-2;
  const LogisticL2Problem p(d.A, d.labels, lambda);
  const Eigen::MatrixXd D = dense(d.A);
  Draw draw(52);
  const DenseVector x = 0.3 * draw.vector(25);
  const DenseVector z = D * x;
  double naive = 0.0;
  for (Index i = 0; i < 60; ++i) {
    const double s = 1.0 / (1.0 + std::exp(-z[i]));
    naive -= d.labels[i] * std::log(s) + (1.0 - d.labels[i]) * std::log(1.0 - s);
  }
  naive = naive / 60.0 + 0.5 * lambda * x.squaredNorm();
  EXPECT_NEAR(p.value(x), naive, 1e-12 * (1.0 + naive));

  const auto one = SparseMatrix::from_triplets(2, 1, {{0, 0, 1.0}, {1, 0, -1.0}});
  const LogisticL2Problem big(one, vec({0.0, 0.0}), 0.0);
  DenseVector g(1);
  const double f = big.evaluate(vec({700.0}), &g);
  EXPECT_TRUE(std::isfinite(f));
  EXPECT_TRUE(g.allFinite());
  EXPECT_NEAR(f, 350.0, 1e-9);
}

TEST(Logistic, ConstructorValidates) {
  const auto A = SparseMatrix::from_triplets(2, 1, {{0, 0, 1.0}});
  EXPECT_THROW(LogisticL2Problem(A, vec({1.0, 2.0}), 0.0), std::invalid_argument);
  EXPECT_THROW(LogisticL2Problem(A, vec({1.0}), 0.0), DimensionMismatch);
  EXPECT_THROW(LogisticL2Problem(A, vec({1.0, 0.0}), -1.0), std::invalid_argument);
  const LogisticL2Problem p(A, vec({1.0, 0.0}), 0.0);
  EXPECT_THROW(p.value(vec({1.0, 2.0})), DimensionMismatch);
}

TEST(Logistic, ConvexAlongRandomMidpoints) {
  auto d = generate_synthetic_classification(small_spec(6));
  const LogisticL2Problem p(d.A, d.labels, 1e-4);
  Draw draw(53);
  for (int t = 0; t < 200; ++t) {
    const DenseVector x = 2.0 * draw.vector(25), y = 2.0 * draw.vector(25);
    EXPECT_LE(p.value(0.5 * (x + y)), 0.5 * (p.value(x) + p.value(y)) + 1e-12);
  }
}

TEST(Logistic, HessianVectorMatchesGradientDifferences) {
  auto d = generate_synthetic_classification(small_spec(7));
  const LogisticL2Problem p(d.A, d.labels, 1e-2);
  Draw draw(54);
  const DenseVector x = draw.vector(25), v = draw.vector(25);
  const double h = 1e-5;
  const DenseVector fd = (p.gradient(x + h * v) - p.gradient(x - h * v)) / (2.0 * h);
  EXPECT_LE((*p.hessian_vector(x, v) - fd).norm(), 1e-7 * (1.0 + fd.norm()));
}

TEST(SmoothAbs, Examples) {
  EXPECT_EQ(smooth_abs(1.0, 0.1), 1.0);
  EXPECT_DOUBLE_EQ(smooth_abs(0.0, 0.1), 0.05);
  EXPECT_DOUBLE_EQ(smooth_abs(0.1, 0.1), 0.1);
  EXPECT_DOUBLE_EQ(smooth_abs(-0.1, 0.1), 0.1);
}

TEST(SmoothAbs, ContinuouslyDifferentiableAtBranchPoint) {
  for (double eps : {1e-3, 0.1, 2.0}) {
    for (double sign : {-1.0, 1.0}) {
      const double z = sign * eps;
      const double inner = z * z / (2.0 * eps) + eps / 2.0;
      EXPECT_NEAR(inner, std::abs(z), 1e-12);
      const double below = std::nextafter(z, 0.0), above = std::nextafter(z, 10.0 * z);
      EXPECT_NEAR(smooth_abs(below, eps), smooth_abs(above, eps), 1e-12);
      EXPECT_NEAR(smooth_abs_derivative(below, eps), smooth_abs_derivative(above, eps), 1e-12);
      EXPECT_NEAR(smooth_abs_derivative(z, eps), sign, 1e-12);
    }
  }
}

TEST(SmoothAbs, GapAndSlopeBounds) {
  const double eps = 0.1;
  for (int i = 0; i <= 10000; ++i) {
    const double z = -1.0 + 2.0 * i / 10000.0;
    const double gap = smooth_abs(z, eps) - std::abs(z);
    EXPECT_GE(gap, 0.0);
    EXPECT_LE(gap, eps / 2.0);
    EXPECT_LE(std::abs(smooth_abs_derivative(z, eps)), 1.0);
    EXPECT_GE(smooth_abs(z, eps), eps / 2.0);
  }
}

TEST(L2Lp, RidgeAtOrigin) {
  auto d = generate_synthetic(small_spec(8));
  const L2LpProblem p(d.A, d.b, d.lambda, 2.0, 0.1);
  DenseVector g(25);
  EXPECT_NEAR(p.evaluate(DenseVector::Zero(25), &g), 0.5 * d.b.squaredNorm(), 1e-12);
  EXPECT_LE((g + dense(d.A).transpose() * d.b).norm(), 1e-12);
}

TEST(L2Lp, RidgeUsesExactSquaredNorm) {
  auto d = generate_synthetic(small_spec(9));
  const L2LpProblem p(d.A, d.b, d.lambda, 2.0, 0.1);
  Draw draw(55);
  const DenseVector x = 1e-3 * draw.vector(25);  // inside the smoothing band
  const double expect =
      0.5 * (dense(d.A) * x - d.b).squaredNorm() + d.lambda * x.squaredNorm();
  EXPECT_NEAR(p.value(x), expect, 1e-12 * expect);
}

TEST(L2Lp, SmoothedL1AtOrigin) {
  auto d = generate_synthetic(small_spec(10));
  const L2LpProblem p(d.A, d.b, d.lambda, 1.0, 0.1);
  DenseVector g(25);
  const double f = p.evaluate(DenseVector::Zero(25), &g);
  EXPECT_NEAR(f, 0.5 * d.b.squaredNorm() + d.lambda * 25 * 0.05, 1e-12 * f);
  EXPECT_LE((g + dense(d.A).transpose() * d.b).norm(), 1e-12);
}

TEST(L2Lp, ConstructorValidates) {
  auto d = generate_synthetic(small_spec(11));
  EXPECT_THROW(L2LpProblem(d.A, d.b, 0.0, 1.0, 0.1), std::invalid_argument);
  EXPECT_THROW(L2LpProblem(d.A, d.b, 1.0, 2.5, 0.1), std::invalid_argument);
  EXPECT_THROW(L2LpProblem(d.A, d.b, 1.0, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(L2LpProblem(d.A, vec({1.0}), 1.0, 1.0, 0.1), DimensionMismatch);
}

TEST(GradientOracles, FiniteDifferencesAtRandomPoints) {
  Draw draw(56);
  auto c = generate_synthetic_classification(small_spec(12));
  const LogisticL2Problem logistic(c.A, c.labels, 1e-3);
  for (int t = 0; t < 100; ++t) {
    EXPECT_LE(fd_rel_error(logistic, draw.vector(25)), 1e-6);
  }
  auto d = generate_synthetic(small_spec(13));
  for (double p : {0.5, 1.0, 2.0}) {
    const L2LpProblem l2lp(d.A, d.b, d.lambda, p, 0.1);
    for (int t = 0; t < 100; ++t) {
      // Keep coordinates off the kinks at |xᵢ| = ε where finite differences straddle branches.
      DenseVector x = draw.vector(25);
      for (Index i = 0; i < 25; ++i) {
        if (std::abs(std::abs(x[i]) - 0.1) < 1e-4) x[i] += 1e-3;
      }
      EXPECT_LE(fd_rel_error(l2lp, x), 1e-6) << "p=" << p;
    }
  }
}

TEST(Quadratic, MinimizerAndSpectrum) {
  Draw draw(57);
  const Eigen::MatrixXd Q = draw.spd(6, 0.5, 3.0);
  const DenseVector c = draw.vector(6);
  const QuadraticProblem q(Q, c);
  EXPECT_LE((Q * q.minimizer() - c).norm(), 1e-12);
  EXPECT_NEAR(q.optimal_value(), -0.5 * c.dot(q.minimizer()), 1e-12);
  EXPECT_LE(q.gradient(q.minimizer()).norm(), 1e-12);
  const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Q).eigenvalues();
  EXPECT_NEAR(q.lambda_min(), ev[0], 1e-12);
  EXPECT_NEAR(q.lambda_max(), ev[5], 1e-12);
  Eigen::MatrixXd bad = Q;
  bad(0, 1) += 1.0;
  EXPECT_THROW(QuadraticProblem(bad, c), std::invalid_argument);
}

TEST(Rng, SeedAndStreamDetermineSequence) {
  Rng a(42, 1), b(42, 1), c(42, 2), d(43, 1);
  bool differs_stream = false, differs_seed = false;
  for (int i = 0; i < 100; ++i) {
    const double va = a.uniform();
    EXPECT_EQ(va, b.uniform());
    EXPECT_GE(va, 0.0);
    EXPECT_LT(va, 1.0);
    differs_stream |= va != c.uniform();
    differs_seed |= va != d.uniform();
  }
  EXPECT_TRUE(differs_stream);
  EXPECT_TRUE(differs_seed);
}

TEST(Rng, NormalMoments) {
  Rng r(7);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Synthetic, SameSeedIsBitIdentical) {
  const auto a = generate_synthetic(small_spec(14));
  const auto b = generate_synthetic(small_spec(14));
  EXPECT_TRUE(a.A == b.A);
  EXPECT_EQ(a.b, b.b);
  EXPECT_EQ(a.v, b.v);
  EXPECT_EQ(a.lambda, b.lambda);
  const auto c = generate_synthetic(small_spec(15));
  EXPECT_NE(a.b, c.b);
}

TEST(Synthetic, FullDensityIsDense) {
  const auto d = generate_synthetic(small_spec(16, 2, 2, 1.0));
  EXPECT_EQ(d.A.nonzeros(), 4);
  EXPECT_EQ(d.A.rows(), 2);
  EXPECT_EQ(d.A.cols(), 2);
}

TEST(Synthetic, DensityWithinTenPercent) {
  for (double r : {0.15, 0.25}) {
    const auto d = generate_synthetic(small_spec(17, 400, 300, r));
    const double empirical = static_cast<double>(d.A.nonzeros()) / (400.0 * 300.0);
    EXPECT_NEAR(empirical, r, 0.1 * r);
  }
}

TEST(Synthetic, LambdaRuleAndTruthVector) {
  const auto spec = small_spec(18, 200, 100, 0.2);
  const auto d = generate_synthetic(spec);
  const double expect = (dense(d.A).transpose() * d.b).cwiseAbs().maxCoeff() / 5.0;
  EXPECT_DOUBLE_EQ(d.lambda, expect);
  EXPECT_GT(d.lambda, 0.0);
  const Index zeros = (d.v.array() == 0.0).count();
  EXPECT_GT(zeros, 25);
  EXPECT_LT(zeros, 75);
  // Residual b − Av is the noise δ ~ N(0, 1).
  const DenseVector delta = d.b - dense(d.A) * d.v;
  EXPECT_NEAR(delta.squaredNorm() / 200.0, 1.0, 0.3);
}

TEST(Synthetic, ClassificationLabelsAreBinary) {
  const auto d = generate_synthetic_classification(small_spec(19, 300, 40));
  const Index ones = (d.labels.array() == 1.0).count();
  const Index zeros = (d.labels.array() == 0.0).count();
  EXPECT_EQ(ones + zeros, 300);
  EXPECT_GT(ones, 30);
  EXPECT_GT(zeros, 30);
}

TEST(Synthetic, RejectsInvalidSpec) {
  auto s = small_spec(20);
  s.density = 0.0;
  EXPECT_THROW(generate_synthetic(s), std::invalid_argument);
  s = small_spec(20);
  s.m = 0;
  EXPECT_THROW(generate_synthetic(s), std::invalid_argument);
}

TEST(Synthetic, RandomSpdQuadraticAttainsSpectrumEnds) {
  Rng rng(21);
  const auto q = random_spd_quadratic(12, 0.1, 10.0, rng);
  EXPECT_NEAR(q.lambda_min(), 0.1, 1e-10);
  EXPECT_NEAR(q.lambda_max(), 10.0, 1e-10);
  EXPECT_LE(q.gradient(q.minimizer()).norm(), 1e-10);
}

}  // namespace
}  // namespace aim::problems
