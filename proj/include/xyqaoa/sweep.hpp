#pragma once

// Run-time studies: threshold times by bisection, fidelity-versus-t_f sweeps with
// light-cone region labels, and two-parameter landscape slices.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "xyqaoa/error.hpp"
#include "xyqaoa/lieb_robinson.hpp"
#include "xyqaoa/optimizer.hpp"
#include "xyqaoa/subspace.hpp"

namespace xyqaoa {

/// Depth used when a study asks for "enough" layers: p = N + offset.
struct DepthRule {
  int offset = 2;
  std::size_t operator()(std::size_t n_sites) const {
    return static_cast<std::size_t>(std::max<long long>(1, static_cast<long long>(n_sites) + offset));
  }
};

struct ThresholdOptions {
  DepthRule depth;
  int bisection_iterations = 12;
  double bracket_per_site = 4.0;  ///< upper bracket = bracket_per_site * N
  OptimizerConfig optimizer;
};

struct ThresholdResult {
  double time = 0.0;
  bool attained = true;
  int probes = 0;
};

/// Best fidelity reachable at run time t, or just whether `threshold` is reachable when set.
inline double best_fidelity_at(std::size_t n_sites, std::size_t depth, double tf, OptimizerConfig config,
                               std::optional<double> threshold = std::nullopt) {
  config.stop_at_fidelity = threshold;
  return optimize_fixed_tf(n_sites, depth, tf, config).best_fidelity;
}

/// Smallest t_f in [0, 4N] whose optimized fidelity reaches `threshold`, to bisection resolution.
inline ThresholdResult min_tf_for_fidelity(std::size_t n_sites, double threshold, const ThresholdOptions& options) {
  require_chain_length(n_sites);
  if (threshold == 0.0) return {0.0, true, 0};
  if (!(threshold > 0.0 && threshold < 1.0)) throw InvalidConstraint("threshold must lie in (0, 1)");
  if (options.bisection_iterations < 1) throw InvalidConstraint("need at least one bisection iteration");
  const std::size_t depth = options.depth(n_sites);
  ThresholdResult out;
  // Shortest schedule found so far that reaches the threshold; rescaled, it seeds later probes.
  std::optional<Schedule> witness;
  auto reaches = [&](double tf) {
    ++out.probes;
    OptimizerConfig cfg = options.optimizer;
    cfg.stop_at_fidelity = threshold;
    if (witness) {
      const double scale = tf / witness->total_time();
      auto flat = witness->flat();
      for (double& v : flat) v *= scale;
      cfg.seed_schedules.push_back(Schedule::from_flat(flat));
    }
    const auto r = optimize_fixed_tf(n_sites, depth, tf, cfg);
    if (r.best_fidelity < threshold) return false;
    witness = r.best_schedule;
    return true;
  };
  double lo = 0.0;
  double hi = options.bracket_per_site * static_cast<double>(n_sites);
  if (!reaches(hi)) {
    out.time = hi;
    out.attained = false;
    return out;
  }
  for (int i = 0; i < options.bisection_iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    (reaches(mid) ? hi : lo) = mid;
  }
  out.time = hi;
  return out;
}

/// Time after which the optimized fidelity exceeds `threshold` (0.01 by default).
inline ThresholdResult suppressed_time(std::size_t n_sites, const ThresholdOptions& options, double threshold = 0.01) {
  return min_tf_for_fidelity(n_sites, threshold, options);
}

struct SweepPoint {
  double tf = 0.0;
  double best_fidelity = 0.0;
  TemporalRegion region = TemporalRegion::suppressed;  ///< light-cone label with L = N - 1
  Schedule best_schedule;
};

/// Optimized fidelity on each run time, with the Lieb-Robinson region label for the chain.
inline std::vector<SweepPoint> tf_sweep(std::size_t n_sites, std::size_t depth, const std::vector<double>& tfs,
                                        const OptimizerConfig& config) {
  const auto lr = LRParameters::for_chain(n_sites);
  const double v = lr_velocity(lr);
  std::vector<SweepPoint> out;
  for (double tf : tfs) {
    OptimizerConfig cfg = config;
    cfg.rng_seed = derive_seed(config.rng_seed, std::bit_cast<std::uint64_t>(tf));
    const auto r = optimize_fixed_tf(n_sites, depth, tf, cfg);
    out.push_back({tf, r.best_fidelity, classify_region(tf, lr.distance, v), r.best_schedule});
  }
  return out;
}

/// Number of sign changes of successive differences (zero differences are skipped).
inline int oscillation_score(const std::vector<double>& values) {
  int changes = 0;
  int last_sign = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double d = values[i] - values[i - 1];
    const int sign = (d > 0.0) - (d < 0.0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) ++changes;
    last_sign = sign;
  }
  return changes;
}

/// Split of a fidelity-versus-t_f curve into suppressed, growing and steady parts.
struct GrowthPattern {
  bool suppressed_ok = false;      ///< F < suppressed_level for every t_f below the suppressed time
  std::size_t growth_begin = 0;    ///< first index at or beyond the suppressed time
  std::size_t steady_begin = 0;    ///< first index after which every step changes F by less than steady_step
  double growth_log_slope = 0.0;   ///< average d(log F)/dt_f over [growth_begin, steady_begin]
  bool has_growth = false;
  bool has_steady = false;

  bool three_regions() const { return suppressed_ok && has_growth && growth_log_slope > 0.0 && has_steady; }
};

inline GrowthPattern analyze_growth(const std::vector<double>& tfs, const std::vector<double>& fidelities,
                                    double suppressed_time_value, double suppressed_level = 0.01,
                                    double steady_step = 0.1) {
  if (tfs.size() != fidelities.size() || tfs.size() < 3) throw InvalidDimension("growth analysis needs >= 3 points");
  GrowthPattern g;
  const std::size_t n = tfs.size();
  g.suppressed_ok = true;
  std::size_t i0 = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (tfs[i] < suppressed_time_value) {
      g.suppressed_ok = g.suppressed_ok && fidelities[i] < suppressed_level;
    } else if (i0 == n) {
      i0 = i;
    }
  }
  if (i0 == n) return g;
  g.growth_begin = i0;
  std::size_t k = n - 1;
  while (k > i0 && std::abs(fidelities[k] - fidelities[k - 1]) < steady_step) --k;
  g.steady_begin = k;
  g.has_steady = k + 1 < n;
  g.has_growth = k > i0 && fidelities[i0] > 0.0;
  if (g.has_growth)
    g.growth_log_slope = (std::log(fidelities[k]) - std::log(fidelities[i0])) / (tfs[k] - tfs[i0]);
  return g;
}

/// Fidelity on the grid xs x ys, varying flat duration indices i and j of `base`.
inline Eigen::MatrixXd landscape_slice(std::size_t n_sites, const Schedule& base, std::size_t i, std::size_t j,
                                       const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t dims = 2 * base.depth();
  if (i >= dims || j >= dims) throw InvalidDimension("landscape index outside the schedule");
  if (i == j) throw InvalidDimension("landscape indices must differ");
  const SubspaceSimulator sim(n_sites);
  auto flat = base.flat();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
  for (std::size_t a = 0; a < xs.size(); ++a) {
    for (std::size_t b = 0; b < ys.size(); ++b) {
      flat[i] = xs[a];
      flat[j] = ys[b];
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = sim.fidelity(flat);
    }
  }
  return out;
}

/// Interior grid points strictly greater than all eight neighbours.
inline std::vector<std::pair<Eigen::Index, Eigen::Index>> strict_local_maxima(const Eigen::MatrixXd& m) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  for (Eigen::Index r = 1; r + 1 < m.rows(); ++r)
    for (Eigen::Index c = 1; c + 1 < m.cols(); ++c) {
      bool peak = true;
      for (int dr = -1; dr <= 1 && peak; ++dr)
        for (int dc = -1; dc <= 1 && peak; ++dc)
          if ((dr != 0 || dc != 0) && !(m(r, c) > m(r + dr, c + dc))) peak = false;
      if (peak) out.emplace_back(r, c);
    }
  return out;
}

}  // namespace xyqaoa
