#include "aim/problems/synthetic.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace aim::problems {

Rng::Rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), stream};
  engine_.seed(seq);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

void check_spec(const SyntheticSpec& spec) {
  if (spec.m <= 0 || spec.n <= 0) throw std::invalid_argument("SyntheticSpec: empty shape");
  if (!(spec.density > 0.0 && spec.density <= 1.0)) {
    throw std::invalid_argument("SyntheticSpec: density must lie in (0, 1]");
  }
  if (!(spec.zero_prob >= 0.0 && spec.zero_prob <= 1.0)) {
    throw std::invalid_argument("SyntheticSpec: zero_prob must lie in [0, 1]");
  }
  if (!(spec.noise_std >= 0.0)) throw std::invalid_argument("SyntheticSpec: noise_std < 0");
}

SparseMatrix draw_design(const SyntheticSpec& spec) {
  Rng mask(spec.seed, kStreamMask);
  Rng values(spec.seed, kStreamValues);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(spec.density * static_cast<double>(spec.m * spec.n)));
  for (Index i = 0; i < spec.m; ++i) {
    for (Index j = 0; j < spec.n; ++j) {
      if (mask.bernoulli(spec.density)) entries.push_back({i, j, values.normal()});
    }
  }
  return SparseMatrix::from_triplets(spec.m, spec.n, entries);
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  check_spec(spec);
  SparseMatrix A = draw_design(spec);

  Rng truth(spec.seed, kStreamTruth);
  const double v_std = 1.0 / std::sqrt(static_cast<double>(spec.n));
  DenseVector v(spec.n);
  for (Index j = 0; j < spec.n; ++j) {
    const bool zero = truth.bernoulli(spec.zero_prob);
    const double value = truth.normal() * v_std;  // drawn either way to keep the stream aligned
    v[j] = zero ? 0.0 : value;
  }

  Rng noise(spec.seed, kStreamNoise);
  DenseVector b = A.multiply(v);
  for (Index i = 0; i < spec.m; ++i) b[i] += spec.noise_std * noise.normal();

  const double lambda = A.multiply_transpose(b).cwiseAbs().maxCoeff() / 5.0;
  return {std::move(A), std::move(b), std::move(v), lambda};
}

SyntheticClassification generate_synthetic_classification(const SyntheticSpec& spec) {
  check_spec(spec);
  SparseMatrix A = draw_design(spec);
  Rng truth(spec.seed, kStreamTruth);
  DenseVector v(spec.n);
  for (Index j = 0; j < spec.n; ++j) v[j] = truth.normal();
  Rng noise(spec.seed, kStreamNoise);
  const DenseVector z = A.multiply(v);
  DenseVector labels(spec.m);
  for (Index i = 0; i < spec.m; ++i) {
    labels[i] = z[i] + spec.noise_std * noise.normal() > 0.0 ? 1.0 : 0.0;
  }
  return {std::move(A), std::move(labels)};
}

Eigen::MatrixXd random_spd_matrix(Index n, double lambda_min, double lambda_max, Rng& rng) {
  if (n <= 0) throw std::invalid_argument("random_spd_matrix: n must be positive");
  if (!(lambda_min > 0.0 && lambda_max >= lambda_min)) {
    throw std::invalid_argument("random_spd_matrix: need 0 < lambda_min <= lambda_max");
  }
  Eigen::MatrixXd G(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd U = qr.householderQ();
  // Sign fix on R's diagonal makes U Haar distributed.
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    if (R(j, j) < 0.0) U.col(j) = -U.col(j);
  }

  DenseVector spectrum(n);
  for (Index i = 0; i < n; ++i) {
    spectrum[i] = lambda_min + (lambda_max - lambda_min) * rng.uniform();
  }
  spectrum[0] = lambda_min;
  if (n > 1) spectrum[n - 1] = lambda_max;

  Eigen::MatrixXd Q = U * spectrum.asDiagonal() * U.transpose();
  return 0.5 * (Q + Q.transpose());
}

QuadraticProblem random_spd_quadratic(Index n, double lambda_min, double lambda_max, Rng& rng) {
  Eigen::MatrixXd Q = random_spd_matrix(n, lambda_min, lambda_max, rng);
  DenseVector x_star(n);
  for (Index i = 0; i < n; ++i) x_star[i] = rng.normal();
  DenseVector c = Q * x_star;
  return QuadraticProblem(std::move(Q), std::move(c));
}

}  // namespace aim::problems
