#pragma once

// Multi-start maximisation of the transfer fidelity over QAOA durations.
// Free mode: durations in the nonnegative orthant. Fixed mode: durations on the
// scaled simplex sum = t_f. Restart i draws its start from a seed derived from
// (rng_seed, i), so restarts are order independent and run in parallel.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xyqaoa/ascent.hpp"
#include "xyqaoa/error.hpp"
#include "xyqaoa/parallel.hpp"
#include "xyqaoa/schedule.hpp"
#include "xyqaoa/simplex.hpp"
#include "xyqaoa/subspace.hpp"

namespace xyqaoa {

struct OptimizerConfig {
  int restarts = 200;
  int max_iterations = 2000;
  double gradient_tolerance = 1e-8;
  std::uint64_t rng_seed = 0;
  /// Empty: free run time. Set: durations constrained to sum to this value.
  std::optional<double> fixed_total_time;
  /// Free-mode start draws t_f uniformly in [lo N, hi N].
  double free_tf_low = 0.5;
  double free_tf_high = 3.0;
  int lbfgs_memory = 8;
  /// 0 = XYQAOA_THREADS or hardware parallelism.
  int threads = 0;
  /// Extra starting points, run before the random restarts (padded to the target depth).
  std::vector<Schedule> seed_schedules;
  /// Stop claiming new restarts once any restart reaches this fidelity.
  std::optional<double> stop_at_fidelity;
};

struct RestartRecord {
  int seed_index = 0;
  double final_fidelity = 0.0;
  int iterations = 0;
  bool converged = false;
  Schedule schedule;  ///< final point of this restart

  friend bool operator==(const RestartRecord&, const RestartRecord&) = default;
};

struct OptimizationResult {
  Schedule best_schedule;
  double best_fidelity = 0.0;
  int best_restart = -1;
  std::vector<RestartRecord> restart_records;
  double wall_time = 0.0;  ///< seconds

  int converged_count() const {
    int c = 0;
    for (const auto& r : restart_records) c += r.converged ? 1 : 0;
    return c;
  }
};

/// Appends zero-duration pairs up to `new_depth`; the unitary is unchanged.
inline Schedule pad_schedule(const Schedule& schedule, std::size_t new_depth) {
  if (new_depth < schedule.depth())
    throw InvalidDimension("pad_schedule: new depth " + std::to_string(new_depth) + " below current depth " +
                           std::to_string(schedule.depth()));
  auto pairs = schedule.pairs();
  pairs.resize(new_depth, DurationPair{0.0, 0.0});
  return Schedule(std::move(pairs));
}

namespace detail {

template <class Projector>
OptimizationResult run_restarts(std::size_t n_sites, std::size_t depth, const OptimizerConfig& config,
                                const Projector& projector, auto&& draw_start) {
  if (depth < 1) throw InvalidDimension("optimizer: depth must be >= 1");
  if (config.restarts < 1 && config.seed_schedules.empty())
    throw InvalidConstraint("optimizer: need at least one restart");
  if (!(config.gradient_tolerance > 0.0)) throw InvalidConstraint("optimizer: gradient tolerance must be positive");
  for (const auto& s : config.seed_schedules)
    if (s.depth() > depth) throw InvalidDimension("optimizer: seed schedule deeper than target depth");

  const auto start = std::chrono::steady_clock::now();
  const SubspaceSimulator sim(n_sites);
  const std::size_t random_count = static_cast<std::size_t>(std::max(config.restarts, 0));
  const std::size_t seed_count = config.seed_schedules.size();
  const std::size_t total = seed_count + random_count;

  AscentOptions options;
  options.max_iterations = config.max_iterations;
  options.gradient_tolerance = config.gradient_tolerance;
  options.memory = config.lbfgs_memory;

  std::vector<std::optional<RestartRecord>> records(total);
  std::atomic<bool> stop{false};

  parallel_for(
      total, worker_count(config.threads),
      [&](std::size_t i) {
        std::vector<double> x0;
        if (i < seed_count) {
          x0 = pad_schedule(config.seed_schedules[i], depth).flat();
        } else {
          Rng rng(derive_seed(config.rng_seed, i - seed_count));
          x0 = draw_start(rng);
        }
        auto objective = [&sim](std::span<const double> x, std::span<double> g) {
          return sim.fidelity_and_gradient(x, g);
        };
        AscentResult r = projected_lbfgs_ascent(objective, projector, std::move(x0), options);
        records[i] = RestartRecord{static_cast<int>(i), r.value, r.iterations, r.converged, Schedule::from_flat(r.x)};
        if (config.stop_at_fidelity && r.value >= *config.stop_at_fidelity) stop.store(true);
      },
      config.stop_at_fidelity ? &stop : nullptr);

  OptimizationResult result;
  for (std::size_t i = 0; i < total; ++i) {
    if (!records[i]) continue;
    const RestartRecord& rec = *records[i];
    result.restart_records.push_back(rec);
    if (result.best_restart < 0 || rec.final_fidelity > result.best_fidelity) {
      result.best_fidelity = rec.final_fidelity;
      result.best_restart = rec.seed_index;
      result.best_schedule = rec.schedule;
    }
  }
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace detail

/// Unconstrained run time: durations only need to be nonnegative.
inline OptimizationResult optimize_free(std::size_t n_sites, std::size_t depth, const OptimizerConfig& config) {
  require_chain_length(n_sites);
  if (config.fixed_total_time) throw InvalidConstraint("optimize_free: config is in fixed-t_f mode");
  const double lo = config.free_tf_low * static_cast<double>(n_sites);
  const double hi = config.free_tf_high * static_cast<double>(n_sites);
  return detail::run_restarts(n_sites, depth, config, BoxProjector{}, [&](Rng& rng) {
    const double tf = uniform(rng, lo, hi);
    return random_simplex_point(2 * depth, tf, rng);
  });
}

/// Durations constrained to the scaled simplex sum = total_time.
inline OptimizationResult optimize_fixed_tf(std::size_t n_sites, std::size_t depth, double total_time,
                                            OptimizerConfig config) {
  require_chain_length(n_sites);
  if (!(total_time > 0.0) || !std::isfinite(total_time))
    throw InvalidConstraint("optimize_fixed_tf: total time must be positive");
  config.fixed_total_time = total_time;
  const SimplexProjector projector{total_time};
  // Seed schedules come in with arbitrary totals; map them onto the simplex.
  for (auto& s : config.seed_schedules) {
    auto flat = pad_schedule(s, depth).flat();
    projector.project(flat);
    s = Schedule::from_flat(flat);
  }
  return detail::run_restarts(n_sites, depth, config, projector,
                              [&](Rng& rng) { return random_simplex_point(2 * depth, total_time, rng); });
}

/// Dispatches on config.fixed_total_time.
inline OptimizationResult optimize(std::size_t n_sites, std::size_t depth, const OptimizerConfig& config) {
  if (config.fixed_total_time) return optimize_fixed_tf(n_sites, depth, *config.fixed_total_time, config);
  return optimize_free(n_sites, depth, config);
}

}  // namespace xyqaoa
