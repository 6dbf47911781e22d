#pragma once

#include <Eigen/SparseCore>

#include <vector>

#include "aim/core.hpp"

namespace aim::problems {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Row-compressed sparse matrix. Explicit zeros supplied at construction are
/// kept so that a parse/serialize round trip is exact.
class SparseMatrix {
 public:
  using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols) : storage_(rows, cols) {}

  /// Throws std::out_of_range for bad indices and std::invalid_argument for
  /// repeated (row, col) pairs.
  static SparseMatrix from_triplets(Index rows, Index cols, const std::vector<Triplet>& entries);

  Index rows() const { return storage_.rows(); }
  Index cols() const { return storage_.cols(); }
  Index nonzeros() const { return storage_.nonZeros(); }

  /// A x
  DenseVector multiply(const DenseVector& x) const;
  /// Aᵀ y
  DenseVector multiply_transpose(const DenseVector& y) const;

  double coeff(Index row, Index col) const { return storage_.coeff(row, col); }
  /// Stored entries in row-major order.
  std::vector<Triplet> triplets() const;

  /// Upper bound on ‖A‖₂² from min(‖A‖_F², ‖A‖₁‖A‖_∞).
  double spectral_norm_sq_bound() const;

  const Storage& storage() const { return storage_; }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

 private:
  Storage storage_;
};

}  // namespace aim::problems
