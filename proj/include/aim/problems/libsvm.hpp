#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aim/core.hpp"
#include "aim/problems/sparse_matrix.hpp"

namespace aim::problems {

struct LibsvmData {
  SparseMatrix A;
  DenseVector labels;                 // mapped to {0, 1}
  std::vector<std::string> warnings;  // skipped blank lines, one entry each
};

struct LibsvmOptions {
  /// Column count; when unset it is the largest feature index seen.
  std::optional<Index> n_features;
};

/// Reads "label idx:val idx:val ..." lines with 1-based, strictly increasing
/// indices. Labels −1/+1 map to 0/1; 0/1 are kept. Blank lines are skipped
/// with a warning. Throws ParseError (with the 1-based line number) for a
/// malformed token, a non-increasing index, an unsupported label, or input
/// without any data line.
LibsvmData parse_libsvm(std::istream& in, const LibsvmOptions& options = {});
LibsvmData parse_libsvm_text(const std::string& text, const LibsvmOptions& options = {});
LibsvmData load_libsvm_file(const std::string& path, const LibsvmOptions& options = {});

/// Canonical text: labels "0"/"1", single-space separated "idx:val" pairs
/// with shortest round-trip decimal values, '\n' after every row.
std::string serialize_libsvm(const SparseMatrix& A, const DenseVector& labels);

}  // namespace aim::problems
