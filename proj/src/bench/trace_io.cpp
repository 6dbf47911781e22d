#include "aim/bench/trace_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace aim::bench {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kTraceHeader = "k,f,gnorm,beta,gamma,r,t";
constexpr const char* kStepsHeader = "k,mu,step_mnorm_sq,rejections";
constexpr const char* kResultsHeader = "solver,cell,seed,k,time_s,gnorm,f,status,beta";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    // from_chars rejects "inf"/"nan" spellings on some libraries; try strtod.
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
      throw ParseError(line, "not a number: '" + s + "'");
    }
  }
  return v;
}

std::uint64_t to_u64(const std::string& s, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, "not an unsigned integer: '" + s + "'");
  }
  return v;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, const char* header,
                                               std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw ParseError(1, path.string() + ": expected header '" + header + "'");
  }
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != columns) {
      throw ParseError(lineno, path.string() + ": expected " + std::to_string(columns) +
                                   " fields");
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

// JSON has no spelling for inf/nan; nlohmann writes them as null.
double json_real(const json& j, const char* key) {
  const auto& v = j.at(key);
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

fs::path with_suffix(const fs::path& stem, const char* suffix) {
  return fs::path(stem.string() + suffix);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ResultRow make_row(const RunTrace& trace, const std::string& cell, std::uint64_t seed,
                   double beta) {
  ResultRow row;
  row.solver = trace.solver;
  row.cell = cell;
  row.seed = seed;
  row.iterations = trace.iterations();
  row.time_s = trace.final_record().elapsed;
  row.final_gnorm = trace.final_record().grad_norm;
  row.final_f = trace.final_record().f;
  row.status = trace.status;
  row.beta = beta;
  return row;
}

std::string trace_stem(const std::string& solver, std::uint64_t seed) {
  return solver + "_s" + std::to_string(seed);
}

void write_trace(const fs::path& stem, const RunTrace& trace, const ResultRow& row) {
  std::string csv = std::string(kTraceHeader) + '\n';
  std::string steps = std::string(kStepsHeader) + '\n';
  for (const auto& rec : trace.records) {
    csv += std::to_string(rec.k) + ',' + format_double(rec.f) + ',' +
           format_double(rec.grad_norm) + ',' + format_double(rec.beta) + ',' +
           format_double(rec.gamma) + ',' + format_double(rec.r) + ',' +
           format_double(rec.elapsed) + '\n';
    if (rec.has_step) {
      steps += std::to_string(rec.k) + ',' + format_double(rec.mu_used) + ',' +
               format_double(rec.step_mnorm_sq) + ',' + std::to_string(rec.inner_rejections) +
               '\n';
    }
  }

  json meta = {
      {"solver", trace.solver},
      {"cell", row.cell},
      {"seed", row.seed},
      {"status", to_string(trace.status)},
      {"message", trace.message},
      {"eta", trace.eta},
      {"gtol", trace.gtol},
      {"adaptive_beta", trace.adaptive_beta},
      {"total_grad_evals", trace.total_grad_evals},
      {"total_rejections", trace.total_rejections},
      {"iterations", row.iterations},
      {"time_s", row.time_s},
      {"final_f", row.final_f},
      {"final_gnorm", row.final_gnorm},
      {"beta", row.beta},
  };

  write_text_file(with_suffix(stem, ".csv"), csv);
  write_text_file(with_suffix(stem, ".steps.csv"), steps);
  write_text_file(with_suffix(stem, ".meta.json"), meta.dump(2) + '\n');
}

TraceFile read_trace(const fs::path& stem) {
  TraceFile out;
  json meta;
  try {
    meta = json::parse(read_text_file(with_suffix(stem, ".meta.json")));
  } catch (const json::parse_error& e) {
    throw ParseError(0, stem.string() + ".meta.json: " + e.what());
  }

  try {
    RunTrace& t = out.trace;
    t.solver = meta.at("solver").get<std::string>();
    t.status = run_status_from_string(meta.at("status").get<std::string>());
    t.message = meta.value("message", "");
    t.eta = meta.at("eta").get<double>();
    t.gtol = meta.at("gtol").get<double>();
    t.adaptive_beta = meta.at("adaptive_beta").get<bool>();
    t.total_grad_evals = meta.at("total_grad_evals").get<std::size_t>();
    t.total_rejections = meta.at("total_rejections").get<std::size_t>();

    ResultRow& r = out.row;
    r.solver = t.solver;
    r.cell = meta.at("cell").get<std::string>();
    r.seed = meta.at("seed").get<std::uint64_t>();
    r.iterations = meta.at("iterations").get<std::size_t>();
    r.time_s = json_real(meta, "time_s");
    r.final_f = json_real(meta, "final_f");
    r.final_gnorm = json_real(meta, "final_gnorm");
    r.status = t.status;
    r.beta = json_real(meta, "beta");
  } catch (const json::exception& e) {
    throw ParseError(0, stem.string() + ".meta.json: " + e.what());
  }

  const auto rows = read_csv(with_suffix(stem, ".csv"), kTraceHeader, 7);
  std::size_t line = 1;
  for (const auto& f : rows) {
    ++line;
    IterRecord rec;
    rec.k = to_u64(f[0], line);
    rec.f = to_double(f[1], line);
    rec.grad_norm = to_double(f[2], line);
    rec.beta = to_double(f[3], line);
    rec.gamma = to_double(f[4], line);
    rec.r = to_double(f[5], line);
    rec.elapsed = to_double(f[6], line);
    out.trace.records.push_back(std::move(rec));
  }

  const auto steps = read_csv(with_suffix(stem, ".steps.csv"), kStepsHeader, 4);
  line = 1;
  std::size_t cursor = 0;
  for (const auto& f : steps) {
    ++line;
    const std::size_t k = to_u64(f[0], line);
    auto& recs = out.trace.records;
    while (cursor < recs.size() && recs[cursor].k != k) ++cursor;
    if (cursor == recs.size()) {
      throw ParseError(line, stem.string() + ".steps.csv: step k=" + std::to_string(k) +
                                 " has no matching trace row");
    }
    recs[cursor].has_step = true;
    recs[cursor].mu_used = to_double(f[1], line);
    recs[cursor].step_mnorm_sq = to_double(f[2], line);
    recs[cursor].inner_rejections = static_cast<int>(to_u64(f[3], line));
  }
  return out;
}

std::vector<fs::path> find_traces(const fs::path& dir) {
  std::vector<fs::path> stems;
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  const std::string suffix = ".meta.json";
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string p = entry.path().string();
    if (p.size() > suffix.size() && p.compare(p.size() - suffix.size(), suffix.size(), suffix) == 0) {
      stems.emplace_back(p.substr(0, p.size() - suffix.size()));
    }
  }
  std::sort(stems.begin(), stems.end());
  return stems;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string out = std::string(kResultsHeader) + '\n';
  for (const auto& r : rows) {
    out += r.solver + ',' + r.cell + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.iterations) + ',' + format_double(r.time_s) + ',' +
           format_double(r.final_gnorm) + ',' + format_double(r.final_f) + ',' +
           to_string(r.status) + ',' + format_double(r.beta) + '\n';
  }
  return out;
}

std::vector<ResultRow> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw ParseError(1, std::string("results: expected header '") + kResultsHeader + "'");
  }
  std::vector<ResultRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 9) throw ParseError(lineno, "results: expected 9 fields");
    ResultRow r;
    r.solver = f[0];
    r.cell = f[1];
    r.seed = to_u64(f[2], lineno);
    r.iterations = to_u64(f[3], lineno);
    r.time_s = to_double(f[4], lineno);
    r.final_gnorm = to_double(f[5], lineno);
    r.final_f = to_double(f[6], lineno);
    try {
      r.status = run_status_from_string(f[7]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, e.what());
    }
    r.beta = to_double(f[8], lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace aim::bench
