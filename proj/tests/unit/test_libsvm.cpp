#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "aim/problems/libsvm.hpp"
#include "test_support.hpp"

namespace aim::problems {
namespace {

using aim::testing::Draw;

std::size_t parse_error_line(const std::string& text) {
  try {
    parse_libsvm_text(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no ParseError for: " << text;
  return static_cast<std::size_t>(-1);
}

TEST(Libsvm, BasicMatrix) {
  const auto d = parse_libsvm_text("1 1:0.5 3:-2\n0 2:1\n");
  ASSERT_EQ(d.A.rows(), 2);
  ASSERT_EQ(d.A.cols(), 3);
  const Eigen::MatrixXd D(d.A.storage());
  Eigen::MatrixXd expect(2, 3);
  expect << 0.5, 0, -2, 0, 1, 0;
  EXPECT_EQ(D, expect);
  EXPECT_EQ(d.labels[0], 1.0);
  EXPECT_EQ(d.labels[1], 0.0);
  EXPECT_TRUE(d.warnings.empty());
}

TEST(Libsvm, SignedLabelsMapToBinary) {
  const auto d = parse_libsvm_text("+1 1:1\n-1 1:2\n");
  EXPECT_EQ(d.labels[0], 1.0);
  EXPECT_EQ(d.labels[1], 0.0);
}

TEST(Libsvm, BlankLineSkippedWithWarning) {
  const auto d = parse_libsvm_text("1 1:1\n\n   \n0 2:3\n");
  EXPECT_EQ(d.A.rows(), 2);
  ASSERT_EQ(d.warnings.size(), 2u);
  EXPECT_NE(d.warnings[0].find("line 2"), std::string::npos);
  EXPECT_NE(d.warnings[1].find("line 3"), std::string::npos);
}

TEST(Libsvm, FeatureCountOverride) {
  LibsvmOptions opt;
  opt.n_features = 10;
  EXPECT_EQ(parse_libsvm_text("1 2:1\n", opt).A.cols(), 10);
  opt.n_features = 1;
  EXPECT_THROW(parse_libsvm_text("1 2:1\n", opt), ParseError);
}

TEST(Libsvm, MalformedLinesReportLineNumbers) {
  EXPECT_EQ(parse_error_line("1 1:1\nabc 1:2\n"), 2u);      // non-numeric label
  EXPECT_EQ(parse_error_line("1 1:x\n"), 1u);               // non-numeric value
  EXPECT_EQ(parse_error_line("1 a:1\n"), 1u);               // non-numeric index
  EXPECT_EQ(parse_error_line("1 1:1\n0 1 2\n"), 2u);        // missing colon
  EXPECT_EQ(parse_error_line("1 1:1\n\n0 3:1 2:1\n"), 3u);  // decreasing indices
  EXPECT_EQ(parse_error_line("1 2:1 2:5\n"), 1u);           // repeated index
  EXPECT_EQ(parse_error_line("1 0:1\n"), 1u);               // zero-based index
  EXPECT_EQ(parse_error_line("2 1:1\n"), 1u);               // label outside {−1, 0, 1}
  EXPECT_EQ(parse_error_line("1 1:nan\n"), 1u);             // non-finite value
  EXPECT_EQ(parse_error_line("1 1:1e999\n"), 1u);           // overflow
}

TEST(Libsvm, EmptyInputIsRejected) {
  EXPECT_EQ(parse_error_line(""), 0u);
  EXPECT_EQ(parse_error_line("\n\n"), 0u);
}

TEST(Libsvm, RoundTripIsExactOnLargeCorpus) {
  Draw draw(61);
  const std::string text = aim::testing::libsvm_corpus(draw, 1000, 30);
  LibsvmOptions opt;
  opt.n_features = 30;
  const auto first = parse_libsvm_text(text, opt);
  ASSERT_EQ(first.A.rows(), 1000);

  const std::string canonical = serialize_libsvm(first.A, first.labels);
  const auto second = parse_libsvm_text(canonical, opt);
  EXPECT_TRUE(second.A == first.A);
  EXPECT_EQ(second.labels, first.labels);
  EXPECT_EQ(serialize_libsvm(second.A, second.labels), canonical);
}

TEST(Libsvm, SerializeKeepsExplicitZerosAndShortestDigits) {
  const auto d = parse_libsvm_text("-1 1:0 2:0.1 4:1e-300\n1\n");
  EXPECT_EQ(serialize_libsvm(d.A, d.labels), "0 1:0 2:0.1 4:1e-300\n1\n");
}

TEST(Libsvm, SerializeRejectsBadInput) {
  const auto d = parse_libsvm_text("1 1:1\n0 1:2\n");
  DenseVector bad = d.labels;
  bad[0] = 0.5;
  EXPECT_THROW(serialize_libsvm(d.A, bad), std::invalid_argument);
  EXPECT_THROW(serialize_libsvm(d.A, DenseVector::Zero(3)), DimensionMismatch);
}

TEST(Libsvm, LoadsFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "aim_libsvm_load_test.txt";
  {
    std::ofstream out(path);
    out << "1 1:0.5 3:-2\n0 2:1\n";
  }
  const auto d = load_libsvm_file(path.string());
  EXPECT_EQ(d.A.rows(), 2);
  std::filesystem::remove(path);
  EXPECT_THROW(load_libsvm_file(path.string()), std::runtime_error);
}

}  // namespace
}  // namespace aim::problems
