#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "xyqaoa/error.hpp"
#include "xyqaoa/schedule.hpp"

namespace xyqaoa {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent child seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix_seed(mix_seed(base) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

/// Uniform in [0, 1) from the top 53 bits; portable across standard libraries.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Point uniformly distributed on {x >= 0, sum x = total} via normalised exponential spacings.
inline std::vector<double> random_simplex_point(std::size_t dim, double total, Rng& rng) {
  std::vector<double> x(dim);
  double sum = 0.0;
  for (double& v : x) {
    v = -std::log1p(-uniform01(rng));
    sum += v;
  }
  for (double& v : x) v *= total / sum;
  return x;
}

inline Schedule random_simplex_schedule(std::size_t depth, double total_time, Rng& rng) {
  if (depth < 1) throw InvalidDimension("random_simplex_schedule: depth must be >= 1");
  if (!(total_time > 0.0)) throw InvalidConstraint("random_simplex_schedule: total time must be positive");
  return Schedule::from_flat(random_simplex_point(2 * depth, total_time, rng));
}

/// Euclidean projection onto {x >= 0}.
struct BoxProjector {
  void project(std::span<double> x) const {
    for (double& v : x) v = std::max(v, 0.0);
  }
  void tangent(std::span<double>, std::span<const char>) const {}
};

/// Euclidean projection onto {x >= 0, sum x = total}.
struct SimplexProjector {
  double total = 1.0;

  void project(std::span<double> x) const {
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      cumulative += sorted[j];
      const double candidate = (cumulative - total) / static_cast<double>(j + 1);
      if (sorted[j] - candidate > 0.0) theta = candidate;
    }
    for (double& v : x) v = std::max(v - theta, 0.0);
  }

  /// Removes the component along (1,...,1) on the free coordinates.
  void tangent(std::span<double> d, std::span<const char> free) const {
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (free[i]) {
        sum += d[i];
        ++count;
      }
    if (count == 0) return;
    const double mean = sum / count;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (free[i]) d[i] -= mean;
  }
};

}  // namespace xyqaoa
