#include "aim/problems/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aim::problems {

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols,
                                         const std::vector<Triplet>& entries) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("SparseMatrix: negative shape");
  std::vector<Triplet> sorted = entries;
  for (const auto& t : sorted) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::out_of_range("SparseMatrix: entry (" + std::to_string(t.row) + ", " +
                              std::to_string(t.col) + ") outside " + std::to_string(rows) + "x" +
                              std::to_string(cols));
    }
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].row == sorted[i - 1].row && sorted[i].col == sorted[i - 1].col) {
      throw std::invalid_argument("SparseMatrix: duplicate entry (" +
                                  std::to_string(sorted[i].row) + ", " +
                                  std::to_string(sorted[i].col) + ")");
    }
  }

  SparseMatrix out(rows, cols);
  std::vector<Index> per_row(static_cast<std::size_t>(rows), 0);
  for (const auto& t : sorted) ++per_row[static_cast<std::size_t>(t.row)];
  out.storage_.reserve(per_row);
  // insert() keeps explicit zeros, unlike setFromTriplets' pruning paths.
  for (const auto& t : sorted) out.storage_.insert(t.row, t.col) = t.value;
  out.storage_.makeCompressed();
  return out;
}

DenseVector SparseMatrix::multiply(const DenseVector& x) const {
  if (x.size() != cols()) throw DimensionMismatch("SparseMatrix::multiply: size mismatch");
  return storage_ * x;
}

DenseVector SparseMatrix::multiply_transpose(const DenseVector& y) const {
  if (y.size() != rows()) {
    throw DimensionMismatch("SparseMatrix::multiply_transpose: size mismatch");
  }
  return storage_.transpose() * y;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(static_cast<std::size_t>(nonzeros()));
  for (Index i = 0; i < storage_.outerSize(); ++i) {
    for (Storage::InnerIterator it(storage_, i); it; ++it) {
      out.push_back({it.row(), it.col(), it.value()});
    }
  }
  return out;
}

double SparseMatrix::spectral_norm_sq_bound() const {
  double frob = 0.0;
  DenseVector row_abs = DenseVector::Zero(rows());
  DenseVector col_abs = DenseVector::Zero(cols());
  for (Index i = 0; i < storage_.outerSize(); ++i) {
    for (Storage::InnerIterator it(storage_, i); it; ++it) {
      frob += it.value() * it.value();
      row_abs[it.row()] += std::abs(it.value());
      col_abs[it.col()] += std::abs(it.value());
    }
  }
  const double inf_norm = rows() > 0 ? row_abs.maxCoeff() : 0.0;
  const double one_norm = cols() > 0 ? col_abs.maxCoeff() : 0.0;
  return std::min(frob, inf_norm * one_norm);
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonzeros() != b.nonzeros()) return false;
  const auto ta = a.triplets();
  const auto tb = b.triplets();
  return std::equal(ta.begin(), ta.end(), tb.begin(), [](const Triplet& x, const Triplet& y) {
    return x.row == y.row && x.col == y.col && x.value == y.value;
  });
}

}  // namespace aim::problems
