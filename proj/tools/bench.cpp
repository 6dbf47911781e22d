// bench: runs the solver comparison grid and post-processes its traces.
//
//   bench run <spec.json> [--full-scale] [--seed N] [--out DIR] [--threads N]
//   bench verify <trace-dir>
//   bench summarize <trace-dir> [--layout by_cell|by_lambda] [--drsom]
//   bench plot <trace-dir> --out DIR

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "aim/bench/experiment.hpp"
#include "aim/bench/report.hpp"

namespace fs = std::filesystem;
using namespace aim::bench;

namespace {

int cmd_run(const std::string& spec_path, bool full_scale, const std::optional<std::uint64_t>& seed,
            const std::optional<std::string>& out, int threads) {
  SpecOverrides ov;
  ov.full_scale = full_scale;
  ov.seed = seed;
  if (out) ov.output_dir = fs::path(*out);
  const ExperimentSpec spec = load_experiment_spec(spec_path, ov);

  RunOptions opts;
  opts.threads = threads;
  const auto rows = run_experiment(spec, opts);

  std::size_t converged = 0;
  for (const auto& r : rows) converged += r.status == aim::RunStatus::converged;
  std::printf("%zu runs (%zu converged) -> %s\n", rows.size(), converged,
              spec.output_dir.string().c_str());
  return 0;
}

int cmd_verify(const std::string& dir) {
  const DirectoryReport report = verify_directory(dir);
  const fs::path path = fs::path(dir) / "verify_report.txt";
  {
    std::ofstream f(path);
    aim::verify::write_report(f, report.results);
  }
  std::size_t failures = 0;
  for (const auto& c : report.results) {
    if (!c.pass) {
      ++failures;
      std::cout << aim::verify::format(c) << '\n';
    }
  }
  std::printf("%zu traces, %zu checks, %zu failures (report: %s)\n", report.traces,
              report.results.size(), failures, path.string().c_str());
  return failures == 0 ? 0 : 1;
}

int cmd_summarize(const std::string& dir, const std::string& layout, bool drsom) {
  auto rows = collect_rows(dir);
  if (rows.empty()) {
    std::fprintf(stderr, "no traces under %s\n", dir.c_str());
    return 1;
  }
  std::vector<std::string> cells;
  for (const auto& r : rows) {
    if (std::find(cells.begin(), cells.end(), r.cell) == cells.end()) cells.push_back(r.cell);
  }
  sort_rows(rows, cells);
  std::cout << emit_summary(rows, layout_from_string(layout), drsom);
  return 0;
}

int cmd_plot(const std::string& dir, const std::string& out) {
  const auto files = emit_plot_data(dir, out);
  std::printf("%zu series written to %s\n", files.size(), out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive inertial method benchmark harness"};
  app.require_subcommand(1);

  std::string spec_path;
  bool full_scale = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  int threads = 0;
  auto* run = app.add_subcommand("run", "run an experiment spec");
  run->add_option("spec", spec_path, "experiment JSON")->required()->check(CLI::ExistingFile);
  run->add_flag("--full-scale", full_scale, "use the full-size problem grid");
  run->add_option("--seed", seed, "override the seed base");
  run->add_option("--out", out, "override the output directory");
  run->add_option("--threads", threads, "worker threads (default: BENCH_THREADS or all cores)");

  std::string trace_dir;
  auto* ver = app.add_subcommand("verify", "check descent and stopping on a trace directory");
  ver->add_option("trace-dir", trace_dir)->required()->check(CLI::ExistingDirectory);

  std::string layout = "by_cell";
  bool drsom = false;
  auto* sum = app.add_subcommand("summarize", "print the summary table for a trace directory");
  sum->add_option("trace-dir", trace_dir)->required()->check(CLI::ExistingDirectory);
  sum->add_option("--layout", layout)->check(CLI::IsMember({"by_cell", "by_lambda"}));
  sum->add_flag("--drsom", drsom, "append published DRSOM reference columns");

  std::string plot_out;
  auto* plot = app.add_subcommand("plot", "write (k, f - f_best, gnorm) series");
  plot->add_option("trace-dir", trace_dir)->required()->check(CLI::ExistingDirectory);
  plot->add_option("--out", plot_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(spec_path, full_scale, seed, out, threads);
    if (*ver) return cmd_verify(trace_dir);
    if (*sum) return cmd_summarize(trace_dir, layout, drsom);
    if (*plot) return cmd_plot(trace_dir, plot_out);
  } catch (const aim::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
