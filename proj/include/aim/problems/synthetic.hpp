#pragma once

#include <cstdint>
#include <random>

#include "aim/core.hpp"
#include "aim/problems/objectives.hpp"
#include "aim/problems/sparse_matrix.hpp"

namespace aim::problems {

/// Seedable generator with reproducible output on every platform.
///
/// The engine is std::mt19937_64 seeded through std::seed_seq with
/// {seed_lo32, seed_hi32, stream}; both are fully specified by the standard.
/// Uniforms take the top 53 bits of one draw; normals use Box-Muller and
/// consume two uniforms per normal (the second variate is discarded).
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint32_t stream = 0);

  double uniform();  // [0, 1)
  double normal();   // N(0, 1)
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Disjoint substreams used by generate_synthetic.
enum SyntheticStream : std::uint32_t {
  kStreamMask = 1,
  kStreamValues = 2,
  kStreamTruth = 3,
  kStreamNoise = 4,
};

struct SyntheticSpec {
  Index m = 200;
  Index n = 100;
  double density = 0.15;  // r: probability an entry of A is nonzero
  double zero_prob = 0.5; // q: probability vᵢ = 0
  double noise_std = 1.0;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  SparseMatrix A;
  DenseVector b;
  DenseVector v;  // ground truth
  double lambda;  // ‖Aᵀb‖_∞ / 5
};

/// A with Bernoulli(r) mask and N(0,1) values (row-major draw order),
/// vᵢ = 0 w.p. q else N(0, 1/n), b = Av + δ with δᵢ ~ N(0, noise_std²).
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// Logistic data on the same design distribution: bᵢ = 1[aᵢᵀv + δᵢ > 0]
/// with v ~ N(0, 1) dense and δᵢ ~ N(0, noise_std²).
struct SyntheticClassification {
  SparseMatrix A;
  DenseVector labels;
};
SyntheticClassification generate_synthetic_classification(const SyntheticSpec& spec);

/// Q = Uᵀ diag(λ) U with U Haar-orthogonal and λ uniform in
/// [lambda_min, lambda_max] (both endpoints attained); c = Q x* with
/// x* ~ N(0, 1).
QuadraticProblem random_spd_quadratic(Index n, double lambda_min, double lambda_max, Rng& rng);

/// Random symmetric positive definite matrix with the given spectrum range.
Eigen::MatrixXd random_spd_matrix(Index n, double lambda_min, double lambda_max, Rng& rng);

}  // namespace aim::problems
