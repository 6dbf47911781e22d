#include "aim/problems/libsvm.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string_view>

namespace aim::problems {
namespace {

std::optional<double> parse_double(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  if (tok.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<long long> parse_index(std::string_view tok) {
  if (tok.empty()) return std::nullopt;
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

void append_double(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

LibsvmData parse_libsvm(std::istream& in, const LibsvmOptions& options) {
  LibsvmData data;
  std::vector<Triplet> entries;
  std::vector<double> labels;
  Index max_index = 0;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = split_ws(line);
    if (tokens.empty()) {
      data.warnings.push_back("line " + std::to_string(lineno) + ": blank line skipped");
      continue;
    }

    const auto label = parse_double(tokens[0]);
    if (!label) {
      throw ParseError(lineno, "non-numeric label '" + std::string(tokens[0]) + "'");
    }
    double mapped;
    if (*label == 1.0) {
      mapped = 1.0;
    } else if (*label == 0.0 || *label == -1.0) {
      mapped = 0.0;
    } else {
      throw ParseError(lineno, "unsupported label '" + std::string(tokens[0]) + "'");
    }
    const Index row = static_cast<Index>(labels.size());
    labels.push_back(mapped);

    long long prev = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto tok = tokens[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(lineno, "expected idx:val, got '" + std::string(tok) + "'");
      }
      const auto idx = parse_index(tok.substr(0, colon));
      const auto val = parse_double(tok.substr(colon + 1));
      if (!idx || !val) {
        throw ParseError(lineno, "non-numeric feature token '" + std::string(tok) + "'");
      }
      if (*idx < 1) throw ParseError(lineno, "feature index must be >= 1");
      if (*idx <= prev) {
        throw ParseError(lineno, "feature indices must be strictly increasing (" +
                                     std::to_string(prev) + " then " + std::to_string(*idx) + ")");
      }
      prev = *idx;
      entries.push_back({row, static_cast<Index>(*idx - 1), *val});
      max_index = std::max<Index>(max_index, static_cast<Index>(*idx));
    }
  }

  if (labels.empty()) throw ParseError(0, "input contains no data lines");

  const Index cols = options.n_features.value_or(max_index);
  if (cols < max_index) {
    throw ParseError(0, "feature index " + std::to_string(max_index) + " exceeds n_features " +
                            std::to_string(cols));
  }
  data.A = SparseMatrix::from_triplets(static_cast<Index>(labels.size()), cols, entries);
  data.labels = Eigen::Map<const DenseVector>(labels.data(), static_cast<Index>(labels.size()));
  return data;
}

LibsvmData parse_libsvm_text(const std::string& text, const LibsvmOptions& options) {
  std::istringstream in(text);
  return parse_libsvm(in, options);
}

LibsvmData load_libsvm_file(const std::string& path, const LibsvmOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open LIBSVM file: " + path);
  return parse_libsvm(in, options);
}

std::string serialize_libsvm(const SparseMatrix& A, const DenseVector& labels) {
  if (labels.size() != A.rows()) throw DimensionMismatch("serialize_libsvm: one label per row");
  std::string out;
  const auto& S = A.storage();
  for (Index i = 0; i < A.rows(); ++i) {
    if (labels[i] != 0.0 && labels[i] != 1.0) {
      throw std::invalid_argument("serialize_libsvm: labels must be 0 or 1");
    }
    out += labels[i] == 1.0 ? '1' : '0';
    for (SparseMatrix::Storage::InnerIterator it(S, i); it; ++it) {
      out += ' ';
      out += std::to_string(it.col() + 1);
      out += ':';
      append_double(out, it.value());
    }
    out += '\n';
  }
  return out;
}

}  // namespace aim::problems
