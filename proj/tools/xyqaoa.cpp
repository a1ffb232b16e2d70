// xyqaoa: batch front end for the chain simulator, optimizer, grid harness and report generator.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xyqaoa/error.hpp"
#include "xyqaoa/fit.hpp"
#include "xyqaoa/format.hpp"
#include "xyqaoa/grid.hpp"
#include "xyqaoa/lieb_robinson.hpp"
#include "xyqaoa/optimizer.hpp"
#include "xyqaoa/pontryagin.hpp"
#include "xyqaoa/range.hpp"
#include "xyqaoa/report.hpp"
#include "xyqaoa/schedule.hpp"
#include "xyqaoa/serialize.hpp"
#include "xyqaoa/subspace.hpp"
#include "xyqaoa/sweep.hpp"
#include "xyqaoa/svg.hpp"

namespace fs = std::filesystem;
using namespace xyqaoa;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  svg::write_file(path, text);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t sites(int n) {
  if (n < 2) throw UsageError("--n must be at least 2");
  return static_cast<std::size_t>(n);
}

// ---- simulate ----

struct SimulateArgs {
  int n = 0;
  std::string schedule;
};

int cmd_simulate(const SimulateArgs& a) {
  const auto schedule = parse_schedule(a.schedule);
  const auto state = apply_schedule(schedule, sites(a.n));
  std::cout << "F=" << format_fixed(state.population(state.n_sites()), 12) << '\n';
  std::cout << "site,re,im,population\n";
  for (std::size_t k = 1; k <= state.n_sites(); ++k) {
    const auto c = state.amplitude(k);
    std::cout << k << ',' << format_double(c.real(), 12) << ',' << format_double(c.imag(), 12) << ','
              << format_double(std::norm(c), 12) << '\n';
  }
  return 0;
}

// ---- optimize ----

struct OptimizeArgs {
  int n = 0;
  int p = 0;
  std::optional<double> tf;
  int restarts = 200;
  std::uint64_t seed = 0;
  int max_iterations = 2000;
  int threads = 1;
  bool timing = false;
  std::string output_dir = ".";
};

OptimizerConfig optimizer_config(int restarts, std::uint64_t seed, std::optional<double> tf, int max_iterations,
                                 int threads) {
  if (restarts < 1) throw UsageError("--restarts must be positive");
  if (max_iterations < 1) throw UsageError("--max-iterations must be positive");
  if (tf && !(*tf > 0.0)) throw UsageError("--tf must be positive");
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.rng_seed = seed;
  cfg.fixed_total_time = tf;
  cfg.max_iterations = max_iterations;
  cfg.threads = threads;
  return cfg;
}

int cmd_optimize(const OptimizeArgs& a) {
  const auto n = sites(a.n);
  if (a.p < 1) throw UsageError("--p must be at least 1");
  const auto cfg = optimizer_config(a.restarts, a.seed, a.tf, a.max_iterations, a.threads);
  const auto p = static_cast<std::size_t>(a.p);
  const auto result = optimize(n, p, cfg);

  const std::string tf_text = a.tf ? format_double(*a.tf) : "free";
  const fs::path path = fs::path(a.output_dir) / ("optimize_N" + std::to_string(n) + "_p" + std::to_string(p) + "_tf" +
                                                  tf_text + "_seed" + std::to_string(a.seed) + ".json");
  write_text(path, to_json(result, n, p, cfg, a.timing).dump(2) + "\n");

  std::cout << "N=" << n << " p=" << p << " tf=" << tf_text << " restarts=" << a.restarts << " seed=" << a.seed << '\n';
  std::cout << "best_fidelity=" << format_fixed(result.best_fidelity, 12) << '\n';
  std::cout << "converged=" << result.converged_count() << '/' << a.restarts << '\n';
  std::cout << "total_time=" << format_double(result.best_schedule.total_time(), 12) << '\n';
  std::cout << "schedule=" << format_schedule(result.best_schedule) << '\n';
  std::cout << "json=" << path.string() << '\n';
  return 0;
}

// ---- grid ----

struct GridArgs {
  std::string spec;
  std::string preset;
  std::vector<int> n_subset;
  bool resume = false;
  std::uint64_t seed = 0;
  int threads = 0;
  std::optional<int> max_restarts;
  int max_iterations = 2000;
  bool timing = false;
  std::string output_dir = ".";
};

int cmd_grid(const GridArgs& a) {
  if (a.spec.empty() == a.preset.empty()) throw UsageError("give exactly one of --spec or --preset");
  GridSpec spec;
  if (!a.spec.empty()) {
    if (!a.n_subset.empty()) throw UsageError("--n only applies to --preset");
    spec = grid_spec_from_json(nlohmann::json::parse(read_text(a.spec)));
  } else {
    spec = grid_preset(a.preset, a.n_subset);
  }
  if (a.max_restarts && *a.max_restarts < 1) throw UsageError("--max-restarts must be positive");

  const fs::path csv = fs::path(a.output_dir) / (detail::file_stem(spec.label, 0) + ".csv");
  fs::create_directories(csv.parent_path());
  if (!a.resume && fs::exists(csv)) fs::remove(csv);

  GridOptions opt;
  opt.seed = a.seed;
  opt.threads = a.threads;
  opt.record_timing = a.timing;
  opt.max_restarts = a.max_restarts;
  opt.max_iterations = a.max_iterations;
  const std::size_t total = spec.cells().size();
  std::size_t done = 0;
  opt.on_record = [&](const ExperimentRecord& r) {
    ++done;
    std::cerr << '[' << done << "] N=" << r.n << " p=" << r.p << " tf=" << format_tf(r.tf)
              << " F=" << format_fixed(r.best_fidelity, 6) << '\n';
  };
  const auto summary = run_grid(spec, opt, csv);
  std::cout << "label=" << spec.label << " cells=" << total << " computed=" << summary.computed
            << " skipped=" << summary.skipped << '\n';
  std::cout << "csv=" << csv.string() << '\n';
  return summary.complete ? 0 : kExitRuntime;
}

// ---- landscape ----

struct LandscapeArgs {
  int n = 0;
  std::string schedule;
  int p = 0;
  std::optional<double> tf;
  int restarts = 50;
  std::uint64_t seed = 0;
  int i = 0;
  int j = 1;
  std::string x_range = "0:0.05:2";
  std::string y_range = "0:0.05:2";
  std::string output_dir = ".";
};

int cmd_landscape(const LandscapeArgs& a) {
  const auto n = sites(a.n);
  Schedule base;
  if (!a.schedule.empty()) {
    if (a.p != 0) throw UsageError("give either --schedule or --p, not both");
    base = parse_schedule(a.schedule);
  } else {
    if (a.p < 1) throw UsageError("give --schedule or --p");
    base = optimize(n, static_cast<std::size_t>(a.p), optimizer_config(a.restarts, a.seed, a.tf, 2000, 1)).best_schedule;
  }
  if (a.i < 0 || a.j < 0) throw UsageError("--i and --j must be nonnegative");
  const auto xs = parse_range(a.x_range);
  const auto ys = parse_range(a.y_range);
  const auto values = landscape_slice(n, base, static_cast<std::size_t>(a.i), static_cast<std::size_t>(a.j), xs, ys);

  const std::string stem = "landscape_N" + std::to_string(n) + "_i" + std::to_string(a.i) + "_j" + std::to_string(a.j);
  std::string csv = "x,y,fidelity\n";
  for (std::size_t r = 0; r < xs.size(); ++r)
    for (std::size_t c = 0; c < ys.size(); ++c)
      csv += format_double(xs[r]) + ',' + format_double(ys[c]) + ',' +
             format_double(values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))) + '\n';
  const fs::path dir(a.output_dir);
  write_text(dir / (stem + ".csv"), csv);
  svg::Heatmap h;
  h.title = "N=" + std::to_string(n) + " fidelity landscape";
  h.x_label = "duration " + std::to_string(a.i);
  h.y_label = "duration " + std::to_string(a.j);
  h.xs = xs;
  h.ys = ys;
  h.values = values;
  write_text(dir / (stem + ".svg"), svg::render(h));

  std::cout << "base=" << format_schedule(base) << '\n';
  std::cout << "max_fidelity=" << format_fixed(values.maxCoeff(), 12) << '\n';
  std::cout << "strict_local_maxima=" << strict_local_maxima(values).size() << '\n';
  std::cout << "csv=" << (dir / (stem + ".csv")).string() << '\n';
  std::cout << "svg=" << (dir / (stem + ".svg")).string() << '\n';
  return 0;
}

// ---- lr-bound ----

struct LrArgs {
  int n = 0;
  std::string t_range;
  double coupling = 2.0;
  int dimension = 1;
  std::string output_dir;
};

int cmd_lr_bound(const LrArgs& a) {
  const auto n = sites(a.n);
  if (!(a.coupling > 0.0)) throw UsageError("--coupling must be positive");
  if (a.dimension < 1) throw UsageError("--dimension must be at least 1");
  const auto ts = parse_range(a.t_range);
  const auto lr = LRParameters{a.coupling, a.dimension, static_cast<double>(n) - 1.0};
  const double v = lr_velocity(lr);

  std::string csv = "t,epsilon,bound,bound_raw,region\n";
  svg::LinePlot plot;
  plot.title = "Lieb-Robinson ceiling, N=" + std::to_string(n);
  plot.x_label = "t";
  plot.y_label = "bound";
  svg::Series s{"bound", {}, {}, false, false};
  for (double t : ts) {
    csv += format_double(t, 12) + ',' + format_double(lr_epsilon(t, lr.distance, v), 12) + ',' +
           format_double(lr_success_bound(t, lr.distance, v), 12) + ',' +
           format_double(lr_success_bound_raw(t, lr.distance, v), 12) + ',' +
           std::string(to_string(classify_region(t, lr.distance, v))) + '\n';
    s.x.push_back(t);
    s.y.push_back(lr_success_bound(t, lr.distance, v));
  }
  std::cout << csv;
  if (!a.output_dir.empty()) {
    plot.series.push_back(std::move(s));
    const double t1 = (lr.distance + std::log(kSuppressedEpsilon / 2.0)) / v;
    const double t2 = (lr.distance + std::log(kSteadyEpsilon / 2.0)) / v;
    if (!ts.empty()) {
      const auto [lo, hi] = std::minmax_element(ts.begin(), ts.end());
      plot.bands = {{*lo, t1, "suppressed", "#c6dbef"}, {t1, t2, "exponential growth", "#fdd0a2"},
                    {t2, *hi, "steady growth", "#c7e9c0"}};
    }
    const fs::path dir(a.output_dir);
    write_text(dir / ("lr_bound_N" + std::to_string(n) + ".csv"), csv);
    write_text(dir / ("lr_bound_N" + std::to_string(n) + ".svg"), svg::render(plot));
  }
  return 0;
}

// ---- pontryagin-check ----

struct PontryaginArgs {
  int n = 0;
  std::string schedule;
  double tolerance = 1e-3;
  std::string output_dir;
};

int cmd_pontryagin(const PontryaginArgs& a) {
  const auto n = sites(a.n);
  if (!(a.tolerance > 0.0)) throw UsageError("--tolerance must be positive");
  const auto report = verify_pontryagin(parse_schedule(a.schedule), n, a.tolerance);
  const std::string text = to_json(report).dump(2) + "\n";
  std::cout << text;
  if (!a.output_dir.empty()) write_text(fs::path(a.output_dir) / ("pontryagin_N" + std::to_string(n) + ".json"), text);
  return 0;
}

// ---- fit ----

struct FitArgs {
  std::string csv;
  std::string model;
  std::string x;
  std::string y;
  std::string output_dir;
};

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string print_fit(const FitResult& f) {
  std::string s = "model=" + std::string(to_string(f.model)) + " params=(";
  for (std::size_t k = 0; k < f.params.size(); ++k) s += (k ? "," : "") + format_double(f.params[k], 12);
  return s + ") r2=" + format_double(f.r_squared, 12) + " points=" + std::to_string(f.n_points);
}

int cmd_fit(const FitArgs& a) {
  const FitModel model = parse_fit_model(a.model);
  const std::string text = read_text(a.csv);
  nlohmann::json out = nlohmann::json::array();

  if (text.rfind(kCsvHeader, 0) == 0) {
    if (!a.x.empty() || !a.y.empty()) throw UsageError("--x/--y do not apply to grid CSV files");
    // Grid CSV: one fit of best fidelity against depth per (label, N, t_f) series.
    std::map<std::tuple<std::string, int, std::string>, std::pair<std::vector<double>, std::vector<double>>> series;
    for (const auto& r : read_grid_csv_text(text).records) {
      auto& [xs, ys] = series[{r.label, r.n, format_tf(r.tf)}];
      xs.push_back(r.p);
      ys.push_back(r.best_fidelity);
    }
    for (const auto& [key, xy] : series) {
      const auto& [label, n, tf] = key;
      std::cout << "label=" << label << " N=" << n << " tf=" << tf << ' ';
      try {
        const auto f = fit(model, xy.first, xy.second);
        std::cout << print_fit(f) << '\n';
        auto j = to_json(f);
        j["label"] = label;
        j["N"] = n;
        j["tf"] = tf;
        out.push_back(j);
      } catch (const FitError& e) {
        std::cout << "error=\"" << e.what() << "\"\n";
      }
    }
  } else {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw FitError("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv(line);
    auto column = [&](const std::string& name, std::size_t fallback) {
      if (name.empty()) {
        if (fallback >= header.size()) throw FitError("CSV needs at least two columns");
        return fallback;
      }
      const auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) throw UsageError("no column named '" + name + "'");
      return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t cx = column(a.x, 0), cy = column(a.y, 1);
    std::vector<double> xs, ys;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim(line).empty()) continue;
      const auto f = split_csv(line);
      if (std::max(cx, cy) >= f.size()) throw FitError("short CSV row: " + line);
      try {
        xs.push_back(parse_double(f[cx]));
        ys.push_back(parse_double(f[cy]));
      } catch (const ParseError& e) {
        throw FitError(std::string("bad CSV value: ") + e.what());
      }
    }
    const auto f = fit(model, xs, ys);
    std::cout << print_fit(f) << '\n';
    out.push_back(to_json(f));
  }
  if (!a.output_dir.empty()) write_text(fs::path(a.output_dir) / "fit.json", out.dump(2) + "\n");
  return 0;
}

// ---- report ----

struct ReportArgs {
  std::string csv_dir;
  std::string output_dir = ".";
  bool no_landscapes = false;
};

int cmd_report(const ReportArgs& a) {
  if (!fs::is_directory(a.csv_dir)) throw UsageError("--csv-dir is not a directory: " + a.csv_dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(a.csv_dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<ExperimentRecord> records;
  for (const auto& f : files) {
    const std::string text = read_text(f);
    if (text.rfind(kCsvHeader, 0) != 0) continue;
    auto contents = read_grid_csv_text(text);
    std::cerr << "read " << contents.records.size() << " rows from " << f.string() << '\n';
    records.insert(records.end(), contents.records.begin(), contents.records.end());
  }
  if (records.empty()) throw IoError("no grid CSV rows found in " + a.csv_dir);
  ReportOptions opt;
  opt.landscapes = !a.no_landscapes;
  const auto out = write_report(records, a.output_dir, opt);
  for (const auto& f : out.files) std::cout << f.string() << '\n';
  return 0;
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const FitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceLimit& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA state transfer on an XY chain: simulate, optimize, bound and plot.", "xyqaoa"};
  app.require_subcommand(1);
  app.get_formatter()->column_width(36);
  app.footer("Exit codes: 0 success, 1 runtime failure, 2 usage error.");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Apply a schedule to |1> and print F = |<N|psi>|^2 and the amplitudes");
  c_sim->add_option("--n", sim.n, "Chain length N (>= 2)")->required();
  c_sim->add_option("--schedule", sim.schedule, "Durations \"dB1;dC1;dB2;dC2;...\" (empty for none)")->required();

  OptimizeArgs opt;
  auto* c_opt = app.add_subcommand("optimize", "Multi-start optimization of the schedule; writes a JSON result");
  c_opt->add_option("--n", opt.n, "Chain length N (>= 2)")->required();
  c_opt->add_option("--p", opt.p, "Circuit depth (number of hop/phase pairs)")->required();
  c_opt->add_option("--tf", opt.tf, "Fix the total run time (default: free)");
  c_opt->add_option("--restarts", opt.restarts, "Number of random starts")->capture_default_str();
  c_opt->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  c_opt->add_option("--max-iterations", opt.max_iterations, "Iteration cap per start")->capture_default_str();
  c_opt->add_option("--threads", opt.threads, "Worker threads (0: XYQAOA_THREADS or all cores)")->capture_default_str();
  c_opt->add_flag("--timing", opt.timing, "Include wall time in the JSON (makes output run-dependent)");
  c_opt->add_option("--output-dir", opt.output_dir, "Directory for the JSON result")->capture_default_str();

  GridArgs grid;
  auto* c_grid = app.add_subcommand("grid", "Run an (N, p, t_f) grid, streaming rows to <output-dir>/<label>.csv");
  c_grid->add_option("--spec", grid.spec, "Grid specification JSON file");
  c_grid->add_option("--preset", grid.preset, "Built-in grid: run1, run2 or unconstrained");
  c_grid->add_option("--n", grid.n_subset, "Restrict a preset to these chain lengths")->delimiter(',');
  c_grid->add_flag("--resume", grid.resume, "Keep rows already in the CSV and compute only missing cells");
  c_grid->add_option("--seed", grid.seed, "Global seed; each cell derives its own")->capture_default_str();
  c_grid->add_option("--threads", grid.threads, "Concurrent cells (0: XYQAOA_THREADS or all cores)")
      ->capture_default_str();
  c_grid->add_option("--max-restarts", grid.max_restarts, "Cap restarts per cell");
  c_grid->add_option("--max-iterations", grid.max_iterations, "Iteration cap per start")->capture_default_str();
  c_grid->add_flag("--timing", grid.timing, "Record wall time per cell (otherwise 0)");
  c_grid->add_option("--output-dir", grid.output_dir, "Directory for the CSV")->capture_default_str();

  LandscapeArgs land;
  auto* c_land = app.add_subcommand("landscape", "Fidelity over two schedule durations; writes CSV and SVG heatmap");
  c_land->add_option("--n", land.n, "Chain length N (>= 2)")->required();
  c_land->add_option("--schedule", land.schedule, "Base schedule \"dB1;dC1;...\"");
  c_land->add_option("--p", land.p, "Optimize a depth-p base schedule instead of --schedule");
  c_land->add_option("--tf", land.tf, "Fixed run time for the optimized base");
  c_land->add_option("--restarts", land.restarts, "Random starts for the optimized base")->capture_default_str();
  c_land->add_option("--seed", land.seed, "Random seed for the optimized base")->capture_default_str();
  c_land->add_option("--i", land.i, "First varied duration index (0-based, hop/phase interleaved)")
      ->capture_default_str();
  c_land->add_option("--j", land.j, "Second varied duration index")->capture_default_str();
  c_land->add_option("--x-range", land.x_range, "Values for duration i, start:step:stop")->capture_default_str();
  c_land->add_option("--y-range", land.y_range, "Values for duration j, start:step:stop")->capture_default_str();
  c_land->add_option("--output-dir", land.output_dir, "Directory for CSV and SVG")->capture_default_str();

  LrArgs lr;
  auto* c_lr = app.add_subcommand("lr-bound", "Print the Lieb-Robinson success-probability ceiling as CSV");
  c_lr->add_option("--n", lr.n, "Chain length N (>= 2); distance L = N - 1")->required();
  c_lr->add_option("--t-range", lr.t_range, "Times, start:step:stop")->required();
  c_lr->add_option("--coupling", lr.coupling, "Local term norm J")->capture_default_str();
  c_lr->add_option("--dimension", lr.dimension, "Lattice dimension D")->capture_default_str();
  c_lr->add_option("--output-dir", lr.output_dir, "Also write CSV and SVG here");

  PontryaginArgs pmp;
  auto* c_pmp = app.add_subcommand("pontryagin-check", "Check a schedule against the bang-bang optimality conditions");
  c_pmp->add_option("--n", pmp.n, "Chain length N (>= 2)")->required();
  c_pmp->add_option("--schedule", pmp.schedule, "Schedule \"dB1;dC1;...\"")->required();
  c_pmp->add_option("--tolerance", pmp.tolerance, "Tolerance on the switching function")->capture_default_str();
  c_pmp->add_option("--output-dir", pmp.output_dir, "Also write the JSON report here");

  FitArgs fit_args;
  auto* c_fit = app.add_subcommand("fit", "Least-squares fit of CSV data");
  c_fit->add_option("--csv", fit_args.csv, "Input CSV (grid output or any CSV with a header row)")->required();
  c_fit->add_option("--model", fit_args.model, "quadratic, inverted_exponential or linear")->required();
  c_fit->add_option("--x", fit_args.x, "x column name (default: first column)");
  c_fit->add_option("--y", fit_args.y, "y column name (default: second column)");
  c_fit->add_option("--output-dir", fit_args.output_dir, "Also write fit.json here");

  ReportArgs rep;
  auto* c_rep = app.add_subcommand("report", "Regenerate SVG figures and summaries from grid CSV files");
  c_rep->add_option("--csv-dir", rep.csv_dir, "Directory holding grid CSV files")->required();
  c_rep->add_option("--output-dir", rep.output_dir, "Directory for SVG and JSON output")->capture_default_str();
  c_rep->add_flag("--no-landscapes", rep.no_landscapes, "Skip landscape heatmaps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  if (c_sim->parsed()) return guarded([&] { return cmd_simulate(sim); });
  if (c_opt->parsed()) return guarded([&] { return cmd_optimize(opt); });
  if (c_grid->parsed()) return guarded([&] { return cmd_grid(grid); });
  if (c_land->parsed()) return guarded([&] { return cmd_landscape(land); });
  if (c_lr->parsed()) return guarded([&] { return cmd_lr_bound(lr); });
  if (c_pmp->parsed()) return guarded([&] { return cmd_pontryagin(pmp); });
  if (c_fit->parsed()) return guarded([&] { return cmd_fit(fit_args); });
  if (c_rep->parsed()) return guarded([&] { return cmd_report(rep); });
  return kExitUsage;
}
