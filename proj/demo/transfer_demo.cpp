// Walk through one chain length: optimize at increasing depth, check the best schedule against
// the bang-bang conditions, and compare its run time with the light-cone estimate.

#include <cstdio>
#include <cstdlib>

#include "xyqaoa/format.hpp"
#include "xyqaoa/lieb_robinson.hpp"
#include "xyqaoa/optimizer.hpp"
#include "xyqaoa/pontryagin.hpp"

int main(int argc, char** argv) {
  using namespace xyqaoa;
  const std::size_t n = argc > 1 ? static_cast<std::size_t>(std::atoi(argv[1])) : 5;
  const std::size_t max_depth = argc > 2 ? static_cast<std::size_t>(std::atoi(argv[2])) : 7;

  OptimizerConfig cfg;
  cfg.restarts = 40;
  cfg.rng_seed = 2024;

  std::printf("chain of %zu sites, free run time, %d restarts per depth\n", n, cfg.restarts);
  std::printf("%4s %14s %10s\n", "p", "best F", "t_f");
  OptimizationResult best;
  for (std::size_t p = 1; p <= max_depth; ++p) {
    auto r = optimize_free(n, p, cfg);
    std::printf("%4zu %14.10f %10.4f\n", p, r.best_fidelity, r.best_schedule.total_time());
    if (r.best_fidelity > best.best_fidelity) best = std::move(r);
  }

  const auto report = verify_pontryagin(best.best_schedule, n);
  std::printf("\nbest schedule: %s\n", format_schedule(best.best_schedule, 6).c_str());
  std::printf("switches: %zu, optimality check: %s\n", report.switch_times.size(),
              std::string(to_string(report.verdict)).c_str());

  const auto lr = LRParameters::for_chain(n);
  const double v = lr_velocity(lr);
  const double t = best.best_schedule.total_time();
  std::printf("light-cone velocity %.4f, L/v = %.4f, ceiling at t_f: %.4f\n", v,
              transfer_time_estimate(lr.distance, v), lr_success_bound(t, lr.distance, v));
  return 0;
}
