#pragma once

#include <random>
#include <vector>

#include "xyqaoa/schedule.hpp"

namespace xyqaoa::test {

/// Random schedule with durations uniform in [0, max_duration).
inline Schedule random_schedule(std::mt19937_64& rng, std::size_t depth, double max_duration = 1.5) {
  std::uniform_real_distribution<double> u(0.0, max_duration);
  std::vector<double> flat(2 * depth);
  for (double& v : flat) v = u(rng);
  return Schedule::from_flat(flat);
}

}  // namespace xyqaoa::test
