#include "aim/bench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "aim/bench/experiment.hpp"

namespace aim::bench {
namespace fs = std::filesystem;

Layout layout_from_string(const std::string& s) {
  if (s == "by_cell") return Layout::by_cell;
  if (s == "by_lambda") return Layout::by_lambda;
  throw ConfigError("unknown layout '" + s + "' (expected by_cell or by_lambda)");
}

std::optional<DrsomReference> drsom_reference(const std::string& cell) {
  static const std::map<std::string, DrsomReference> table = {
      {"real-sim_lam1e-05", {35, 0.820609}},
      {"real-sim_lam1e-06", {87, 2.07868}},
      {"real-sim_lam1e-07", {251, 5.99746}},

      {"p0.5_m1000_n500_r0.15", {39, 0.15768}},
      {"p0.5_m1000_n500_r0.25", {33, 0.12755}},
      {"p0.5_m1000_n1000_r0.15", {46, 0.454836}},
      {"p0.5_m1000_n1000_r0.25", {34, 0.370155}},
      {"p0.5_m1000_n1500_r0.15", {55, 0.616161}},
      {"p0.5_m1000_n1500_r0.25", {37, 0.509491}},

      {"p1_m1000_n500_r0.15", {31, 0.129948}},
      {"p1_m1000_n500_r0.25", {31, 0.143879}},
      {"p1_m1000_n1000_r0.15", {41, 0.276894}},
      {"p1_m1000_n1000_r0.25", {38, 0.315482}},
      {"p1_m1000_n1500_r0.15", {46, 0.467993}},
      {"p1_m1000_n1500_r0.25", {36, 0.344985}},

      {"p2_m1000_n500_r0.15", {39, 0.168569}},
      {"p2_m1000_n500_r0.25", {42, 0.173702}},
      {"p2_m1000_n1000_r0.15", {65, 0.488232}},
      {"p2_m1000_n1000_r0.25", {66, 0.570909}},
      {"p2_m1000_n1500_r0.15", {76, 0.91293}},
      {"p2_m1000_n1500_r0.25", {72, 0.824639}},
  };
  const auto it = table.find(cell);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double v, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

void sort_rows(std::vector<ResultRow>& rows, const std::vector<std::string>& cell_order) {
  auto cell_pos = [&](const std::string& c) {
    return static_cast<std::size_t>(std::find(cell_order.begin(), cell_order.end(), c) -
                                    cell_order.begin());
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const ResultRow& a, const ResultRow& b) {
    const auto ca = cell_pos(a.cell), cb = cell_pos(b.cell);
    if (ca != cb) return ca < cb;
    const int ra = solver_rank(a.solver), rb = solver_rank(b.solver);
    if (ra != rb) return ra < rb;
    return a.seed < b.seed;
  });
}

std::string emit_summary(const std::vector<ResultRow>& rows, Layout layout, bool drsom) {
  if (rows.empty()) throw std::invalid_argument("emit_summary: no rows");

  std::vector<std::string> cells;
  std::vector<std::string> solvers;
  std::map<std::pair<std::string, std::string>, std::vector<const ResultRow*>> groups;
  for (const auto& r : rows) {
    if (std::find(cells.begin(), cells.end(), r.cell) == cells.end()) cells.push_back(r.cell);
    if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end()) {
      solvers.push_back(r.solver);
    }
    groups[{r.solver, r.cell}].push_back(&r);
  }
  std::stable_sort(solvers.begin(), solvers.end(), [](const auto& a, const auto& b) {
    return solver_rank(a) < solver_rank(b);
  });

  std::string out = "solver,cell,k,time_s,converged";
  if (drsom) out += ",drsom_k,drsom_time_s,drsom_source";
  out += '\n';

  auto emit = [&](const std::string& solver, const std::string& cell) {
    const auto it = groups.find({solver, cell});
    if (it == groups.end()) return;
    std::vector<double> ks, ts;
    std::size_t converged = 0;
    for (const ResultRow* r : it->second) {
      ks.push_back(static_cast<double>(r->iterations));
      ts.push_back(r->time_s);
      if (r->status == RunStatus::converged) ++converged;
    }
    out += solver + ',' + cell + ',' + fmt(median(ks), "%g") + ',' +
           fmt(median(ts), "%.6g") + ',' + std::to_string(converged) + '/' +
           std::to_string(it->second.size());
    if (drsom) {
      if (const auto ref = drsom_reference(cell)) {
        out += ',' + fmt(ref->k, "%g") + ',' + fmt(ref->time_s, "%g") + ",paper";
      } else {
        out += ",,,";
      }
    }
    out += '\n';
  };

  if (layout == Layout::by_cell) {
    for (const auto& c : cells)
      for (const auto& s : solvers) emit(s, c);
  } else {
    for (const auto& s : solvers)
      for (const auto& c : cells) emit(s, c);
  }
  return out;
}

std::string mask_column(const std::string& csv, const std::string& column) {
  std::istringstream in(csv);
  std::string line;
  std::string out;
  long target = -1;
  bool header = true;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (header) {
      const auto it = std::find(fields.begin(), fields.end(), column);
      if (it != fields.end()) target = it - fields.begin();
      header = false;
    } else if (target >= 0 && static_cast<std::size_t>(target) < fields.size()) {
      fields[static_cast<std::size_t>(target)].clear();
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> collect_rows(const fs::path& dir) {
  std::vector<ResultRow> rows;
  for (const auto& stem : find_traces(dir)) rows.push_back(read_trace(stem).row);
  return rows;
}

std::vector<fs::path> emit_plot_data(const fs::path& trace_dir, const fs::path& out_dir) {
  std::map<std::pair<std::string, std::uint64_t>, std::vector<TraceFile>> groups;
  for (const auto& stem : find_traces(trace_dir)) {
    TraceFile tf = read_trace(stem);
    groups[{tf.row.cell, tf.row.seed}].push_back(std::move(tf));
  }

  std::vector<fs::path> written;
  for (auto& [key, traces] : groups) {
    double f_best = std::numeric_limits<double>::infinity();
    for (const auto& tf : traces) {
      if (!tf.trace.records.empty() && std::isfinite(tf.trace.final_record().f)) {
        f_best = std::min(f_best, tf.trace.final_record().f);
      }
    }
    for (const auto& tf : traces) {
      std::string csv = "k,f_gap,gnorm\n";
      for (const auto& rec : tf.trace.records) {
        csv += std::to_string(rec.k) + ',' + format_double(rec.f - f_best) + ',' +
               format_double(rec.grad_norm) + '\n';
      }
      const fs::path path =
          out_dir / key.first / ("s" + std::to_string(key.second)) / (tf.trace.solver + ".csv");
      write_text_file(path, csv);
      written.push_back(path);
    }
  }
  return written;
}

DirectoryReport verify_directory(const fs::path& dir) {
  DirectoryReport report;
  for (const auto& stem : find_traces(dir)) {
    const TraceFile tf = read_trace(stem);
    ++report.traces;
    const std::string tag = tf.row.cell + '/' + trace_stem(tf.row.solver, tf.row.seed) + ':';
    auto append = [&](std::vector<verify::CheckResult> results) {
      for (auto& c : results) {
        c.name = tag + c.name;
        report.results.push_back(std::move(c));
      }
    };

    const bool is_aim = tf.trace.solver.rfind("aim_", 0) == 0;
    if (is_aim) {
      append(verify::check_descent(tf.trace, tf.trace.eta));
      append(verify::check_acceptance(tf.trace, tf.trace.eta));
    }
    if (tf.trace.status == RunStatus::converged) {
      const double g = tf.trace.final_record().grad_norm;
      report.results.push_back(
          {tag + "stopping", tf.trace.final_record().k, g, tf.trace.gtol, g <= tf.trace.gtol});
    }
  }
  return report;
}

}  // namespace aim::bench
