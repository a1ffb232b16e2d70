#pragma once

// Grid-search harness: one optimization per (N, p, t_f) cell, records streamed to CSV,
// completed cells skipped on rerun, final file sorted by (N, p, t_f).

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "xyqaoa/error.hpp"
#include "xyqaoa/format.hpp"
#include "xyqaoa/optimizer.hpp"
#include "xyqaoa/parallel.hpp"
#include "xyqaoa/range.hpp"
#include "xyqaoa/schedule.hpp"

namespace xyqaoa {

struct GridCell {
  int n = 0;
  int p = 0;
  std::optional<double> tf;  ///< empty: free run time

  auto key() const { return std::make_tuple(n, p, tf.has_value(), tf.value_or(0.0)); }
  friend bool operator<(const GridCell& a, const GridCell& b) { return a.key() < b.key(); }
  friend bool operator==(const GridCell& a, const GridCell& b) { return a.key() == b.key(); }
};

struct GridSpec {
  std::string label;
  std::vector<int> n_values;
  std::map<int, std::vector<int>> p_ranges;
  /// Missing or empty entry: free run time for that N.
  std::map<int, std::vector<double>> tf_ranges;
  /// Per-N restart overrides; otherwise 200 for N <= 15 and 400 above.
  std::map<int, int> restarts;

  int restarts_for(int n) const {
    if (auto it = restarts.find(n); it != restarts.end()) return it->second;
    return n <= 15 ? 200 : 400;
  }

  void validate() const {
    if (n_values.empty()) throw InvalidConstraint("grid spec has no N values");
    for (int n : n_values) {
      if (n < 2) throw InvalidDimension("grid spec: N must be >= 2");
      auto it = p_ranges.find(n);
      if (it == p_ranges.end() || it->second.empty())
        throw InvalidConstraint("grid spec: no p range for N=" + std::to_string(n));
      for (int p : it->second)
        if (p < 1) throw InvalidDimension("grid spec: p must be >= 1");
      if (auto tf = tf_ranges.find(n); tf != tf_ranges.end())
        for (double t : tf->second)
          if (!(t > 0.0)) throw InvalidConstraint("grid spec: t_f values must be positive");
      if (restarts_for(n) < 1) throw InvalidConstraint("grid spec: restarts must be >= 1");
    }
  }

  /// All cells in canonical (N, p, t_f) order.
  std::vector<GridCell> cells() const {
    validate();
    std::set<GridCell> out;
    for (int n : n_values) {
      const auto tf = tf_ranges.find(n);
      const bool free = tf == tf_ranges.end() || tf->second.empty();
      for (int p : p_ranges.at(n)) {
        if (free)
          out.insert({n, p, std::nullopt});
        else
          for (double t : tf->second) out.insert({n, p, t});
      }
    }
    return {out.begin(), out.end()};
  }
};

namespace detail {

struct PresetRow {
  int n;
  const char* p;
  const char* tf_run1;
  const char* tf_run2;
};

inline constexpr PresetRow kFixedTimeRows[] = {
    {2, "1:7", "1:8", "0.2:0.2:1.6"},        {3, "1:8", "1:10", "0.2:0.2:2.0"},
    {4, "1:9", "1:12", "0.2:0.2:2.4"},       {5, "1:10", "1:14", "0.2:0.2:2.8"},
    {6, "1:11", "1:16", "0.2:0.2:3.2"},      {7, "1:12", "1:18", "0.2:0.2:3.6"},
    {8, "1:13", "1:20", "0.2:0.2:4.0"},      {9, "1:14", "1:22", "0.2:0.2:4.4"},
    {10, "1:15", "1:25", "0.2:0.2:5.0"},     {11, "1:16", "1:27", "0.2:0.2:5.4"},
    {12, "1:17", "1:30", "0.2:0.2:6.0"},     {13, "1:18", "1:32", "0.2:0.2:6.4"},
    {14, "1:19", "1:34", "0.2:0.2:6.8"},     {15, "1:20", "1:36", "0.2:0.2:7.2"},
    {16, "1:2:23", "1:2:39", "0.2:0.4:7.8"}, {17, "1:2:25", "1:2:41", "0.2:0.4:8.2"},
    {18, "1:2:27", "1:2:43", "0.2:0.4:8.6"}, {19, "1:2:29", "1:2:45", "0.2:0.4:9.0"},
    {20, "1:2:31", "1:2:47", "0.2:0.4:9.4"},
};

inline constexpr std::pair<int, const char*> kFreeTimeRows[] = {
    {2, "1:7"},   {3, "1:8"},   {4, "1:9"},   {5, "1:10"},  {6, "1:11"},  {7, "1:12"},  {8, "1:13"},
    {9, "1:14"},  {10, "1:15"}, {11, "1:16"}, {12, "1:17"}, {13, "1:18"}, {14, "1:19"}, {15, "1:20"},
    {16, "1:22"}, {17, "1:24"}, {18, "1:26"}, {19, "1:28"}, {20, "1:30"},
};

}  // namespace detail

/// Built-in grids: "run1" (integer t_f), "run2" (dense t_f near the suppressed region),
/// "unconstrained" (free t_f). `n_subset` empty selects every tabulated N (2..20).
inline GridSpec grid_preset(std::string_view name, const std::vector<int>& n_subset = {}) {
  GridSpec spec;
  spec.label = std::string(name);
  auto wanted = [&](int n) { return n_subset.empty() || std::find(n_subset.begin(), n_subset.end(), n) != n_subset.end(); };
  if (name == "run1" || name == "run2") {
    for (const auto& row : detail::kFixedTimeRows) {
      if (!wanted(row.n)) continue;
      spec.n_values.push_back(row.n);
      spec.p_ranges[row.n] = parse_int_range(row.p);
      spec.tf_ranges[row.n] = parse_range(name == "run1" ? row.tf_run1 : row.tf_run2);
    }
  } else if (name == "unconstrained") {
    for (const auto& [n, p] : detail::kFreeTimeRows) {
      if (!wanted(n)) continue;
      spec.n_values.push_back(n);
      spec.p_ranges[n] = parse_int_range(p);
    }
  } else {
    throw ParseError("unknown grid preset '" + std::string(name) + "' (expected run1, run2 or unconstrained)");
  }
  for (int n : n_subset)
    if (std::find(spec.n_values.begin(), spec.n_values.end(), n) == spec.n_values.end())
      throw InvalidConstraint("grid preset " + spec.label + " has no row for N=" + std::to_string(n));
  return spec;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline std::vector<double> json_range(const nlohmann::json& j) {
  if (j.is_string()) return parse_range(j.get<std::string>());
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) {
      if (!v.is_number()) throw ParseError("range arrays must contain numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  throw ParseError("range must be a string, number or array");
}

inline int json_key_n(const std::string& key) {
  const long long n = parse_integer(key);
  if (n < 2 || n > 1000) throw ParseError("bad N key '" + key + "'");
  return static_cast<int>(n);
}

}  // namespace detail

/// Accepts {"preset": "run2", "n_values": [2]} or a full description with
/// "label", "n_values", "p_ranges", "tf_ranges", "restarts" (ranges as "a:b:c" strings or arrays).
inline GridSpec grid_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("grid spec must be a JSON object");
  static const std::set<std::string> known{"preset", "label", "n_values", "p_ranges", "tf_ranges", "restarts"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ParseError("unknown grid spec field '" + key + "'");

  GridSpec spec;
  std::vector<int> n_values;
  try {
    if (j.contains("n_values")) n_values = j.at("n_values").get<std::vector<int>>();
    if (j.contains("preset")) {
      spec = grid_preset(j.at("preset").get<std::string>(), n_values);
    } else {
      spec.n_values = n_values;
    }
    if (j.contains("label")) spec.label = j.at("label").get<std::string>();
    if (j.contains("p_ranges"))
      for (const auto& [key, value] : j.at("p_ranges").items()) {
        std::vector<int> ps;
        for (double v : detail::json_range(value)) {
          if (v != std::round(v)) throw ParseError("p values must be integers");
          ps.push_back(static_cast<int>(v));
        }
        spec.p_ranges[detail::json_key_n(key)] = ps;
      }
    if (j.contains("tf_ranges"))
      for (const auto& [key, value] : j.at("tf_ranges").items())
        spec.tf_ranges[detail::json_key_n(key)] = detail::json_range(value);
    if (j.contains("restarts")) {
      const auto& r = j.at("restarts");
      if (r.is_number_integer()) {
        for (int n : spec.n_values) spec.restarts[n] = r.get<int>();
      } else {
        for (const auto& [key, value] : r.items()) spec.restarts[detail::json_key_n(key)] = value.get<int>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("grid spec: ") + e.what());
  }
  if (spec.label.empty()) spec.label = "grid";
  spec.validate();
  return spec;
}

inline nlohmann::json grid_spec_to_json(const GridSpec& spec) {
  nlohmann::json j;
  j["label"] = spec.label;
  j["n_values"] = spec.n_values;
  nlohmann::json p = nlohmann::json::object(), tf = nlohmann::json::object(), r = nlohmann::json::object();
  for (const auto& [n, ps] : spec.p_ranges) p[std::to_string(n)] = ps;
  for (const auto& [n, ts] : spec.tf_ranges) tf[std::to_string(n)] = ts;
  for (int n : spec.n_values) r[std::to_string(n)] = spec.restarts_for(n);
  j["p_ranges"] = p;
  j["tf_ranges"] = tf;
  j["restarts"] = r;
  return j;
}

// ---------------------------------------------------------------------------
// Records and CSV

struct ExperimentRecord {
  std::string label;
  int n = 0;
  int p = 0;
  std::optional<double> tf;
  double best_fidelity = 0.0;
  int restarts = 0;
  int converged = 0;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  Schedule best_schedule;

  GridCell cell() const { return {n, p, tf}; }
  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

inline constexpr std::string_view kCsvHeader = "label,N,p,tf,best_fidelity,restarts,converged,seed,wall_time_s,schedule";

inline std::string format_tf(const std::optional<double>& tf) { return tf ? format_double(*tf) : "free"; }

inline std::string to_csv_row(const ExperimentRecord& r) {
  if (r.label.find_first_of(",\n\r\"") != std::string::npos)
    throw InvalidConstraint("record label may not contain commas, quotes or newlines");
  std::string line = r.label;
  line += ',' + std::to_string(r.n) + ',' + std::to_string(r.p) + ',' + format_tf(r.tf) + ',' +
          format_double(r.best_fidelity) + ',' + std::to_string(r.restarts) + ',' + std::to_string(r.converged) +
          ',' + std::to_string(r.seed) + ',' + format_double(r.wall_time_s) + ',' + format_schedule(r.best_schedule);
  return line;
}

inline ExperimentRecord parse_csv_row(std::string_view line) {
  std::vector<std::string_view> f;
  while (true) {
    const auto comma = line.find(',');
    f.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  if (f.size() != 10) throw ParseError("CSV row has " + std::to_string(f.size()) + " fields, expected 10");
  ExperimentRecord r;
  r.label = std::string(f[0]);
  r.n = static_cast<int>(parse_integer(f[1]));
  r.p = static_cast<int>(parse_integer(f[2]));
  if (trim(f[3]) != "free") r.tf = parse_double(f[3]);
  r.best_fidelity = parse_double(f[4]);
  r.restarts = static_cast<int>(parse_integer(f[5]));
  r.converged = static_cast<int>(parse_integer(f[6]));
  {
    const auto s = trim(f[7]);
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError("bad seed field");
    r.seed = seed;
  }
  r.wall_time_s = parse_double(f[8]);
  r.best_schedule = parse_schedule(f[9]);
  if (!(r.best_fidelity >= 0.0 && r.best_fidelity <= 1.0 + 1e-12)) throw ParseError("best_fidelity outside [0, 1]");
  return r;
}

struct CsvContents {
  std::vector<ExperimentRecord> records;
  /// Bytes of trailing text that did not form a complete row (an interrupted write).
  std::size_t discarded_bytes = 0;
};

/// Reads a grid CSV. A final line without a newline is treated as torn and ignored.
inline CsvContents read_grid_csv_text(std::string_view text) {
  CsvContents out;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      out.discarded_bytes = text.size() - pos;
      break;
    }
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw ParseError("unexpected CSV header: '" + std::string(line) + "'");
      header_seen = true;
      continue;
    }
    out.records.push_back(parse_csv_row(line));
  }
  return out;
}

inline CsvContents read_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return read_grid_csv_text(buffer.str());
}

inline void sort_records(std::vector<ExperimentRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const ExperimentRecord& a, const ExperimentRecord& b) { return a.cell() < b.cell(); });
}

inline std::string grid_csv_text(std::vector<ExperimentRecord> records) {
  sort_records(records);
  std::string text(kCsvHeader);
  text += '\n';
  for (const auto& r : records) text += to_csv_row(r) + '\n';
  return text;
}

/// Writes header + canonically sorted rows via a temporary file and rename.
inline void write_grid_csv(const std::filesystem::path& path, const std::vector<ExperimentRecord>& records) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << grid_csv_text(records);
    if (!out.flush()) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace " + path.string() + ": " + ec.message());
}

// ---------------------------------------------------------------------------
// Running a grid

/// Seed of a cell; depends only on (global seed, N, p, t_f).
inline std::uint64_t cell_seed(std::uint64_t global, const GridCell& cell) {
  std::uint64_t s = derive_seed(global, static_cast<std::uint64_t>(cell.n));
  s = derive_seed(s, static_cast<std::uint64_t>(cell.p));
  return derive_seed(s, cell.tf ? std::bit_cast<std::uint64_t>(*cell.tf) : ~std::uint64_t{0});
}

struct GridOptions {
  std::uint64_t seed = 0;
  int threads = 0;  ///< cells run concurrently; restarts inside a cell run serially
  bool record_timing = true;
  /// Caps every cell's restart count (desk-scale runs).
  std::optional<int> max_restarts;
  int max_iterations = 2000;
  double gradient_tolerance = 1e-8;
  /// Stop scheduling after this many newly computed cells (used to exercise resume).
  std::optional<std::size_t> max_new_cells;
  std::function<void(const ExperimentRecord&)> on_record;
};

struct GridRunSummary {
  std::vector<ExperimentRecord> records;  ///< sorted; includes previously completed cells
  std::size_t computed = 0;
  std::size_t skipped = 0;
  bool complete = false;
};

inline ExperimentRecord run_cell(const GridSpec& spec, const GridCell& cell, const GridOptions& options) {
  OptimizerConfig cfg;
  cfg.restarts = spec.restarts_for(cell.n);
  if (options.max_restarts) cfg.restarts = std::min(cfg.restarts, *options.max_restarts);
  cfg.max_iterations = options.max_iterations;
  cfg.gradient_tolerance = options.gradient_tolerance;
  cfg.rng_seed = cell_seed(options.seed, cell);
  cfg.threads = 1;
  const auto n = static_cast<std::size_t>(cell.n);
  const auto p = static_cast<std::size_t>(cell.p);
  const OptimizationResult res = cell.tf ? optimize_fixed_tf(n, p, *cell.tf, cfg) : optimize_free(n, p, cfg);

  ExperimentRecord r;
  r.label = spec.label;
  r.n = cell.n;
  r.p = cell.p;
  r.tf = cell.tf;
  r.best_fidelity = res.best_fidelity;
  r.restarts = cfg.restarts;
  r.converged = res.converged_count();
  r.seed = cfg.rng_seed;
  r.wall_time_s = options.record_timing ? res.wall_time : 0.0;
  r.best_schedule = res.best_schedule;
  return r;
}

/// Runs every cell of `spec`. With a CSV path, rows already present are kept and their cells
/// skipped, new rows are appended as they finish, and the file is rewritten sorted once all
/// cells are done.
inline GridRunSummary run_grid(const GridSpec& spec, const GridOptions& options,
                               const std::optional<std::filesystem::path>& csv_path = std::nullopt) {
  const auto cells = spec.cells();
  GridRunSummary summary;
  std::set<GridCell> done;

  std::ofstream sink;
  if (csv_path) {
    std::vector<ExperimentRecord> existing;
    if (std::filesystem::exists(*csv_path) && std::filesystem::file_size(*csv_path) > 0) {
      auto contents = read_grid_csv(*csv_path);
      existing = std::move(contents.records);
      if (contents.discarded_bytes > 0) write_grid_csv(*csv_path, existing);
    } else {
      write_grid_csv(*csv_path, {});
    }
    const std::set<GridCell> wanted(cells.begin(), cells.end());
    for (auto& r : existing) {
      if (!wanted.count(r.cell()) || done.count(r.cell())) continue;
      if (r.label != spec.label) continue;
      done.insert(r.cell());
      summary.records.push_back(std::move(r));
    }
    summary.skipped = summary.records.size();
    sink.open(*csv_path, std::ios::binary | std::ios::app);
    if (!sink) throw IoError("cannot append to " + csv_path->string());
  }

  std::vector<GridCell> todo;
  for (const auto& c : cells)
    if (!done.count(c)) todo.push_back(c);
  if (options.max_new_cells && todo.size() > *options.max_new_cells) todo.resize(*options.max_new_cells);

  std::mutex sink_mutex;
  parallel_for(todo.size(), worker_count(options.threads), [&](std::size_t i) {
    ExperimentRecord r = run_cell(spec, todo[i], options);
    std::lock_guard lock(sink_mutex);
    if (sink.is_open()) {
      sink << to_csv_row(r) << '\n';
      sink.flush();
      if (!sink) throw IoError("write failed for " + csv_path->string());
    }
    if (options.on_record) options.on_record(r);
    summary.records.push_back(std::move(r));
    ++summary.computed;
  });
  if (sink.is_open()) sink.close();

  sort_records(summary.records);
  summary.complete = summary.records.size() == cells.size();
  if (csv_path && summary.complete) write_grid_csv(*csv_path, summary.records);
  return summary;
}

}  // namespace xyqaoa
