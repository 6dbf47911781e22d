#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aim/solver.hpp"

// On-disk form of a run. Each run is three files sharing a stem:
//   <stem>.csv        k,f,gnorm,beta,gamma,r,t  (one row per iterate)
//   <stem>.steps.csv  k,mu,step_mnorm_sq,rejections  (one row per accepted step)
//   <stem>.meta.json  solver, cell, seed, status and run settings
// Reals are written with 17 significant digits so reading back is exact.
namespace aim::bench {

struct ResultRow {
  std::string solver;
  std::string cell;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  double time_s = 0.0;
  double final_gnorm = 0.0;
  double final_f = 0.0;
  RunStatus status = RunStatus::error;
  double beta = 0.0;  // step size the run used (tuned value for grid-searched baselines)
};

ResultRow make_row(const RunTrace& trace, const std::string& cell, std::uint64_t seed,
                   double beta);

struct TraceFile {
  RunTrace trace;
  ResultRow row;
};

/// "<solver>_s<seed>"
std::string trace_stem(const std::string& solver, std::uint64_t seed);

void write_trace(const std::filesystem::path& stem, const RunTrace& trace, const ResultRow& row);

/// `stem` without extension. Throws ParseError on malformed content and
/// std::runtime_error when a file is missing.
TraceFile read_trace(const std::filesystem::path& stem);

/// All "*.meta.json" stems under `dir`, sorted.
std::vector<std::filesystem::path> find_traces(const std::filesystem::path& dir);

std::string results_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results_csv(const std::string& text);

/// Shortest text that reads back to the same double.
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace aim::bench
