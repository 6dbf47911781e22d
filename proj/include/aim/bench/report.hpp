#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aim/bench/trace_io.hpp"
#include "aim/verify.hpp"

namespace aim::bench {

enum class Layout {
  by_cell,    // cell-major: every solver for the first cell, then the next cell
  by_lambda,  // solver-major: one block per solver across all cells
};
Layout layout_from_string(const std::string& s);

/// Published DRSOM reference point for one cell (iterations and seconds).
struct DrsomReference {
  double k;
  double time_s;
};

/// Reference values for the full-scale cells ("p0.5_m1000_n500_r0.15", ...)
/// and the real-sim logistic cells ("real-sim_lam1e-05", ...).
std::optional<DrsomReference> drsom_reference(const std::string& cell);

/// CSV with columns solver,cell,k,time_s,converged where k and time_s are
/// medians over repetitions and converged is "c/n". With `drsom` set,
/// drsom_k,drsom_time_s,drsom_source are appended; the source is "paper"
/// for cells with a reference value and empty otherwise. Throws
/// std::invalid_argument for empty input.
std::string emit_summary(const std::vector<ResultRow>& rows, Layout layout, bool drsom = false);

/// Blanks every field of the named column, leaving the header intact.
std::string mask_column(const std::string& csv, const std::string& column);

/// For each (cell, seed) writes <out>/<cell>/s<seed>/<solver>.csv with
/// columns k,f_gap,gnorm where f_gap = f − f_best and f_best is the lowest
/// finite final f over the solvers of that (cell, seed). Returns the files
/// written.
std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& trace_dir,
                                                  const std::filesystem::path& out_dir);

struct DirectoryReport {
  std::vector<verify::CheckResult> results;
  std::size_t traces = 0;
  bool pass() const { return verify::all_pass(results); }
};

/// Checks every trace under `dir`: descent and acceptance for AIM traces
/// (tolerance 1e-10·(1 + |f|) and 1e-12), and for converged runs of any
/// solver the final gradient norm against gtol.
DirectoryReport verify_directory(const std::filesystem::path& dir);

/// Rows rebuilt from the trace metadata under `dir`.
std::vector<ResultRow> collect_rows(const std::filesystem::path& dir);

/// Sorts rows into cell order of first appearance, then canonical solver
/// order, then seed.
void sort_rows(std::vector<ResultRow>& rows, const std::vector<std::string>& cell_order);

}  // namespace aim::bench
