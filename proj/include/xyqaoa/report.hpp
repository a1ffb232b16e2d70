#pragma once

// Figure set regenerated from grid CSV records: fidelity against depth, fidelity against run
// time with growth regions and the Lieb-Robinson ceiling, run-time thresholds against chain
// length, and fidelity landscapes around the shallowest free-time optimum.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xyqaoa/fit.hpp"
#include "xyqaoa/grid.hpp"
#include "xyqaoa/lieb_robinson.hpp"
#include "xyqaoa/serialize.hpp"
#include "xyqaoa/sweep.hpp"
#include "xyqaoa/svg.hpp"

namespace xyqaoa {

struct ReportOptions {
  double suppressed_level = 0.01;
  double high_fidelity = 0.99;
  double steady_step = 0.1;
  int landscape_points = 41;
  bool landscapes = true;
  bool discrepancy = true;
};

struct ReportOutput {
  std::vector<std::filesystem::path> files;  ///< in write order
  nlohmann::json summary;
};

/// Per-(label, N) fidelity envelope over depth for each fixed run time.
struct TimeSeries {
  std::vector<double> tf, best;
  std::map<int, std::vector<std::pair<double, double>>> by_depth;
};

namespace detail {

inline std::string file_stem(const std::string& label, int n) {
  std::string s;
  for (char c : label) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  if (s.empty()) s = "grid";
  return n > 0 ? s + "_N" + std::to_string(n) : s;
}

inline TimeSeries collect_time_series(const std::vector<ExperimentRecord>& records) {
  TimeSeries out;
  std::map<double, double> env;
  for (const auto& r : records) {
    if (!r.tf) continue;
    auto [it, inserted] = env.emplace(*r.tf, r.best_fidelity);
    if (!inserted) it->second = std::max(it->second, r.best_fidelity);
    out.by_depth[r.p].push_back({*r.tf, r.best_fidelity});
  }
  for (auto& [p, pts] : out.by_depth) std::sort(pts.begin(), pts.end());
  for (const auto& [tf, f] : env) {
    out.tf.push_back(tf);
    out.best.push_back(f);
  }
  return out;
}

// Smallest run time whose envelope reaches `level`.
inline std::optional<double> first_reaching(const TimeSeries& s, double level) {
  for (std::size_t i = 0; i < s.tf.size(); ++i)
    if (s.best[i] >= level) return s.tf[i];
  return std::nullopt;
}

inline nlohmann::json fit_or_error(FitModel model, const std::vector<double>& x, const std::vector<double>& y) {
  try {
    return to_json(fit(model, x, y));
  } catch (const FitError& e) {
    return {{"model", to_string(model)}, {"error", e.what()}};
  }
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return out;
}

}  // namespace detail

inline ReportOutput write_report(const std::vector<ExperimentRecord>& input, const std::filesystem::path& out_dir,
                                 const ReportOptions& options = {}) {
  std::filesystem::create_directories(out_dir);
  ReportOutput out;
  out.summary = {{"groups", nlohmann::json::array()}};
  auto emit = [&](const std::string& name, const std::string& text) {
    const auto path = out_dir / name;
    svg::write_file(path, text);
    out.files.push_back(path);
  };

  std::map<std::string, std::map<int, std::vector<ExperimentRecord>>> groups;
  std::set<std::size_t> sizes;
  for (const auto& r : input) {
    groups[r.label][r.n].push_back(r);
    sizes.insert(static_cast<std::size_t>(r.n));
  }

  for (const auto& [label, by_n] : groups) {
    std::vector<double> threshold_n, suppressed_t, high_n, high_t;
    for (const auto& [n, records] : by_n) {
      nlohmann::json g = {{"label", label}, {"N", n}};
      const auto lr = LRParameters::for_chain(static_cast<std::size_t>(n));
      const double v = lr_velocity(lr);

      // Free run time: F against depth with both fitted curves.
      std::vector<double> ps, fs;
      const ExperimentRecord* shallowest = nullptr;
      for (const auto& r : records) {
        if (r.tf) continue;
        ps.push_back(r.p);
        fs.push_back(r.best_fidelity);
        if (!shallowest || r.p < shallowest->p) shallowest = &r;
      }
      if (!ps.empty()) {
        svg::LinePlot plot;
        plot.title = label + ", N=" + std::to_string(n) + ", free run time";
        plot.x_label = "depth p";
        plot.y_label = "best fidelity";
        plot.series.push_back({"optimized", ps, fs});
        g["fits"] = nlohmann::json::array();
        for (FitModel m : {FitModel::quadratic, FitModel::inverted_exponential}) {
          g["fits"].push_back(detail::fit_or_error(m, ps, fs));
          try {
            const auto f = fit(m, ps, fs);
            const auto [lo, hi] = std::minmax_element(ps.begin(), ps.end());
            svg::Series curve{std::string(to_string(m)), {}, {}, true, false};
            for (double x : detail::linspace(*lo, *hi, 50)) {
              curve.x.push_back(x);
              curve.y.push_back(f.evaluate(x));
            }
            plot.series.push_back(std::move(curve));
          } catch (const FitError&) {
          }
        }
        emit(detail::file_stem(label, n) + "_fidelity_vs_p.svg", svg::render(plot));
      }

      // Fixed run time: F against t_f with growth regions and the light-cone ceiling.
      const TimeSeries ts = detail::collect_time_series(records);
      if (!ts.tf.empty()) {
        svg::LinePlot plot;
        plot.title = label + ", N=" + std::to_string(n) + ", fixed run time";
        plot.x_label = "run time t_f";
        plot.y_label = "best fidelity";
        plot.log_y = true;
        if (ts.by_depth.size() <= 6)
          for (const auto& [p, pts] : ts.by_depth) {
            svg::Series s{"p=" + std::to_string(p), {}, {}};
            for (const auto& [t, f] : pts) {
              s.x.push_back(t);
              s.y.push_back(f);
            }
            plot.series.push_back(std::move(s));
          }
        plot.series.push_back({"best over p", ts.tf, ts.best});
        svg::Series bound{"LR bound", {}, {}, true, false};
        for (double t : detail::linspace(ts.tf.front(), ts.tf.back(), 200)) {
          bound.x.push_back(t);
          bound.y.push_back(lr_success_bound(t, lr.distance, v));
        }
        plot.series.push_back(std::move(bound));

        const auto t_supp = detail::first_reaching(ts, options.suppressed_level);
        nlohmann::json growth;
        if (t_supp && ts.tf.size() >= 3) {
          const auto gp = analyze_growth(ts.tf, ts.best, *t_supp, options.suppressed_level, options.steady_step);
          const double t_steady = ts.tf[gp.steady_begin];
          plot.bands.push_back({ts.tf.front(), *t_supp, "suppressed", "#c6dbef"});
          if (gp.has_growth) plot.bands.push_back({*t_supp, t_steady, "exponential growth", "#fdd0a2"});
          if (gp.has_steady) plot.bands.push_back({t_steady, ts.tf.back(), "steady growth", "#c7e9c0"});
          growth = {{"suppressed_time", *t_supp},
                    {"steady_begin", t_steady},
                    {"growth_log_slope", gp.growth_log_slope},
                    {"three_regions", gp.three_regions()}};
          threshold_n.push_back(n);
          suppressed_t.push_back(*t_supp);
        }
        if (const auto t_high = detail::first_reaching(ts, options.high_fidelity)) {
          growth["high_fidelity_time"] = *t_high;
          high_n.push_back(n);
          high_t.push_back(*t_high);
        }
        growth["lr_velocity"] = v;
        growth["lr_suppressed_until"] = (lr.distance + std::log(kSuppressedEpsilon / 2.0)) / v;
        growth["lr_steady_from"] = (lr.distance + std::log(kSteadyEpsilon / 2.0)) / v;
        nlohmann::json osc = nlohmann::json::object();
        for (const auto& [p, pts] : ts.by_depth) {
          std::vector<double> f;
          for (const auto& pt : pts) f.push_back(pt.second);
          osc[std::to_string(p)] = oscillation_score(f);
        }
        growth["oscillation_score"] = osc;
        g["time_series"] = growth;
        emit(detail::file_stem(label, n) + "_fidelity_vs_tf.svg", svg::render(plot));
      }

      // Landscape over the first hop/phase pair of the shallowest free-time optimum.
      if (options.landscapes && shallowest && shallowest->best_schedule.depth() >= 1) {
        const auto& base = shallowest->best_schedule;
        const auto flat = base.flat();
        const auto xs = detail::linspace(0.0, std::max(2.0 * flat[0], 1.0), options.landscape_points);
        const auto ys = detail::linspace(0.0, std::max(2.0 * flat[1], 1.0), options.landscape_points);
        svg::Heatmap h;
        h.title = label + ", N=" + std::to_string(n) + ", p=" + std::to_string(shallowest->p) + " landscape";
        h.x_label = "first hop duration";
        h.y_label = "first phase duration";
        h.xs = xs;
        h.ys = ys;
        h.values = landscape_slice(static_cast<std::size_t>(n), base, 0, 1, xs, ys);
        g["landscape_local_maxima"] = strict_local_maxima(h.values).size();
        emit(detail::file_stem(label, n) + "_landscape.svg", svg::render(h));
      }
      out.summary["groups"].push_back(g);
    }

    // Run-time thresholds against chain length.
    if (threshold_n.size() >= 2 || high_n.size() >= 2) {
      svg::LinePlot plot;
      plot.title = label + ": run time thresholds";
      plot.x_label = "chain length N";
      plot.y_label = "run time t_f";
      nlohmann::json fits;
      if (threshold_n.size() >= 2) {
        plot.series.push_back({"F >= " + format_double(options.suppressed_level, 6), threshold_n, suppressed_t});
        fits["suppressed_time"] = detail::fit_or_error(FitModel::linear, threshold_n, suppressed_t);
      }
      if (high_n.size() >= 2) {
        plot.series.push_back({"F >= " + format_double(options.high_fidelity, 6), high_n, high_t});
        fits["high_fidelity_time"] = detail::fit_or_error(FitModel::linear, high_n, high_t);
      }
      out.summary["threshold_fits"][label] = fits;
      emit(detail::file_stem(label, 0) + "_tf_vs_n.svg", svg::render(plot));
    }
  }

  if (options.discrepancy && !sizes.empty()) {
    const auto path = out_dir / "spectral_discrepancy.json";
    svg::write_file(path, spectral_discrepancy_report({sizes.begin(), sizes.end()}).dump(2) + "\n");
    out.files.push_back(path);
  }
  nlohmann::json names = nlohmann::json::array();
  for (const auto& f : out.files) names.push_back(f.filename().string());
  out.summary["files"] = names;
  const auto summary_path = out_dir / "summary.json";
  svg::write_file(summary_path, out.summary.dump(2) + "\n");
  out.files.push_back(summary_path);
  return out;
}

}  // namespace xyqaoa
