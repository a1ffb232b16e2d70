#pragma once

// Projected limited-memory BFGS ascent for smooth objectives over a convex set
// given by a Euclidean projector (box or scaled simplex). Each step searches
// along the projection arc x(a) = P(x + a d) with an Armijo test, so accepted
// iterates never decrease the objective and every evaluated point is feasible.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <numeric>
#include <span>
#include <vector>

namespace xyqaoa {

struct AscentOptions {
  int max_iterations = 2000;
  double gradient_tolerance = 1e-8;  ///< on ||P(x + g) - x||_inf
  int memory = 8;
  int max_backtracks = 40;
  double armijo = 1e-4;
  /// A point where no step improves the objective in floating point counts as converged below this.
  double stall_tolerance = 1e-6;
};

struct AscentResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct CurvaturePair {
  std::vector<double> s, y;
  double rho;
};

// r = H q for the inverse-Hessian approximation of the minimisation problem.
inline std::vector<double> two_loop(const std::deque<CurvaturePair>& memory, std::vector<double> q,
                                    std::span<const char> free) {
  for (std::size_t i = 0; i < q.size(); ++i)
    if (!free[i]) q[i] = 0.0;
  std::vector<double> alpha(memory.size());
  for (std::size_t j = memory.size(); j-- > 0;) {
    alpha[j] = memory[j].rho * dot(memory[j].s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[j] * memory[j].y[i];
  }
  if (!memory.empty()) {
    const auto& last = memory.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) v *= gamma;
  }
  for (std::size_t j = 0; j < memory.size(); ++j) {
    const double beta = memory[j].rho * dot(memory[j].y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[j] - beta) * memory[j].s[i];
  }
  for (std::size_t i = 0; i < q.size(); ++i)
    if (!free[i]) q[i] = 0.0;
  return q;
}

}  // namespace detail

/// Maximises `objective(x, grad) -> value` over the set described by `projector`.
/// `on_accept(value)` is called with the objective after every accepted step.
template <class Objective, class Projector, class OnAccept>
AscentResult projected_lbfgs_ascent(Objective&& objective, const Projector& projector, std::vector<double> x,
                                    const AscentOptions& options, OnAccept&& on_accept) {
  const std::size_t n = x.size();
  AscentResult result;
  projector.project(x);
  std::vector<double> g(n), g_new(n), x_new(n), step(n), trial(n), pg(n);
  std::vector<char> free(n);
  double fx = objective(std::span<const double>(x), std::span<double>(g));
  ++result.evaluations;
  std::deque<detail::CurvaturePair> memory;

  auto projected_gradient = [&] {
    for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + g[i];
    projector.project(trial);
    for (std::size_t i = 0; i < n; ++i) pg[i] = trial[i] - x[i];
  };

  // Returns true and fills x_new/g_new/f_new when an Armijo step along P(x + a d) is found.
  double f_new = fx;
  auto line_search = [&](const std::vector<double>& d, double first_step) {
    double a = first_step;
    for (int attempt = 0; attempt < options.max_backtracks; ++attempt, a *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + a * d[i];
      projector.project(x_new);
      for (std::size_t i = 0; i < n; ++i) step[i] = x_new[i] - x[i];
      if (detail::max_abs(step) == 0.0) return false;
      f_new = objective(std::span<const double>(x_new), std::span<double>(g_new));
      ++result.evaluations;
      if (f_new >= fx + options.armijo * detail::dot(g, step)) return true;
    }
    return false;
  };

  for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
    projected_gradient();
    if (detail::max_abs(pg) < options.gradient_tolerance) {
      result.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) free[i] = (x[i] > 0.0 || pg[i] > 0.0) ? 1 : 0;

    std::vector<double> minus_g(n);
    for (std::size_t i = 0; i < n; ++i) minus_g[i] = free[i] ? -g[i] : 0.0;
    projector.tangent(minus_g, free);
    std::vector<double> d = detail::two_loop(memory, std::move(minus_g), free);
    for (double& v : d) v = -v;
    projector.tangent(d, free);

    bool accepted = false;
    if (!memory.empty() && detail::dot(g, d) > 0.0) accepted = line_search(d, 1.0);
    if (!accepted) {
      memory.clear();
      const double scale = detail::max_abs(pg);
      accepted = line_search(pg, scale > 1.0 ? 1.0 / scale : 1.0);
    }
    if (!accepted) {
      result.converged = detail::max_abs(pg) < options.stall_tolerance;
      break;
    }

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g[i] - g_new[i];  // gradient difference of -F
    }
    const double sy = detail::dot(s, y);
    if (sy > 1e-12 * std::sqrt(detail::dot(s, s) * detail::dot(y, y)) && sy > 0.0) {
      memory.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(memory.size()) > options.memory) memory.pop_front();
    }
    x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    on_accept(fx);
  }
  result.x = std::move(x);
  result.value = fx;
  return result;
}

template <class Objective, class Projector>
AscentResult projected_lbfgs_ascent(Objective&& objective, const Projector& projector, std::vector<double> x,
                                    const AscentOptions& options) {
  return projected_lbfgs_ascent(std::forward<Objective>(objective), projector, std::move(x), options,
                                [](double) {});
}

}  // namespace xyqaoa
