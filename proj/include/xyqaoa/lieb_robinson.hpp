#pragma once

// Lieb-Robinson light-cone quantities for nearest-neighbour chains:
// commutator tail bound, epsilon = 2 exp(v t - L), and the success ceiling
// P(t) <= eps - eps^2 / 4.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string_view>

#include "xyqaoa/error.hpp"

namespace xyqaoa {

struct LRParameters {
  double coupling = 2.0;  ///< J, max local term norm
  int dimension = 1;      ///< D
  double distance = 0.0;  ///< L = N - 1

  static LRParameters for_chain(std::size_t n_sites, double coupling = 2.0) {
    return {coupling, 1, static_cast<double>(n_sites) - 1.0};
  }
};

/// v = 2 e J (4D - 1); 6 e J in one dimension.
inline double lr_velocity(double coupling, int dimension = 1) {
  if (coupling < 0.0) throw InvalidConstraint("lr_velocity: coupling must be nonnegative");
  if (dimension < 1) throw InvalidDimension("lr_velocity: dimension must be >= 1");
  return 2.0 * std::numbers::e * coupling * (4.0 * dimension - 1.0);
}

inline double lr_velocity(const LRParameters& params) { return lr_velocity(params.coupling, params.dimension); }

/// log of 2 sum_{k>=L} x^k / k!, x = 2 J t (4D - 1). -inf when the tail is empty.
inline double log_commutator_series_bound(double t, int distance, double coupling, int dimension = 1) {
  if (t < 0.0 || distance < 0) throw InvalidConstraint("commutator bound needs t >= 0 and L >= 0");
  const double x = 2.0 * coupling * t * (4.0 * dimension - 1.0);
  if (x == 0.0) return distance == 0 ? std::log(2.0) : -std::numeric_limits<double>::infinity();

  // Terms x^k/k! relative to the largest one in the tail, k_peak = max(L, floor(x)).
  const double log_x = std::log(x);
  auto log_term = [&](double k) { return k * log_x - std::lgamma(k + 1.0); };
  const double peak = std::max(static_cast<double>(distance), std::floor(x));
  const double log_peak = log_term(peak);
  double sum = 0.0;
  for (double k = peak; k >= distance; k -= 1.0) {
    const double r = std::exp(log_term(k) - log_peak);
    sum += r;
    if (r < 1e-17) break;
  }
  for (double k = peak + 1.0;; k += 1.0) {
    const double r = std::exp(log_term(k) - log_peak);
    sum += r;
    if (r < 1e-17) break;
  }
  return std::log(2.0) + log_peak + std::log(sum);
}

inline double commutator_series_bound(double t, int distance, double coupling, int dimension = 1) {
  return std::exp(log_commutator_series_bound(t, distance, coupling, dimension));
}

inline double lr_epsilon(double t, double distance, double velocity) {
  if (t < 0.0) throw InvalidConstraint("lr_epsilon: t must be nonnegative");
  return 2.0 * std::exp(velocity * t - distance);
}

/// eps - eps^2/4 without clamping; exceeds 1 nowhere but goes negative for eps > 4.
inline double lr_success_bound_raw(double t, double distance, double velocity) {
  const double eps = lr_epsilon(t, distance, velocity);
  return eps - 0.25 * eps * eps;
}

/// Ceiling on transfer success probability at time t, clamped to [0, 1].
/// Past eps = 2 the inequality is vacuous and the bound is pinned at 1.
inline double lr_success_bound(double t, double distance, double velocity) {
  const double eps = lr_epsilon(t, distance, velocity);
  if (eps >= 2.0) return 1.0;
  const double raw = eps - 0.25 * eps * eps;
  return raw < 0.0 ? 0.0 : (raw > 1.0 ? 1.0 : raw);
}

inline double transfer_time_estimate(double distance, double velocity) {
  if (!(velocity > 0.0)) throw InvalidConstraint("transfer_time_estimate: velocity must be positive");
  return distance / velocity;
}

enum class TemporalRegion { suppressed, exponential_growth, steady_growth };

inline constexpr double kSuppressedEpsilon = 0.02;
inline constexpr double kSteadyEpsilon = 1.0;

inline TemporalRegion classify_region(double t, double distance, double velocity) {
  const double eps = lr_epsilon(t, distance, velocity);
  if (eps < kSuppressedEpsilon) return TemporalRegion::suppressed;
  if (eps < kSteadyEpsilon) return TemporalRegion::exponential_growth;
  return TemporalRegion::steady_growth;
}

inline std::string_view to_string(TemporalRegion r) {
  switch (r) {
    case TemporalRegion::suppressed: return "suppressed";
    case TemporalRegion::exponential_growth: return "exponential_growth";
    case TemporalRegion::steady_growth: return "steady_growth";
  }
  return "unknown";
}

}  // namespace xyqaoa
