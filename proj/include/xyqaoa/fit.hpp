#pragma once

// Least-squares fits used on optimized-fidelity data: F(p) quadratic, F(p) = 1 - exp(-a (p - b)),
// and straight lines for time-versus-N trends.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xyqaoa/error.hpp"

namespace xyqaoa {

enum class FitModel { quadratic, inverted_exponential, linear };

inline std::string_view to_string(FitModel m) {
  switch (m) {
    case FitModel::quadratic: return "quadratic";
    case FitModel::inverted_exponential: return "inverted_exponential";
    case FitModel::linear: return "linear";
  }
  return "unknown";
}

inline FitModel parse_fit_model(std::string_view name) {
  if (name == "quadratic") return FitModel::quadratic;
  if (name == "inverted_exponential") return FitModel::inverted_exponential;
  if (name == "linear") return FitModel::linear;
  throw ParseError("unknown fit model '" + std::string(name) + "'");
}

struct FitResult {
  FitModel model = FitModel::linear;
  /// quadratic: (a, b, c); inverted_exponential: (a, b); linear: (slope, intercept)
  std::vector<double> params;
  double r_squared = 0.0;
  std::vector<double> residuals;  ///< y - model(x) for the points used
  std::size_t n_points = 0;
  std::size_t excluded = 0;  ///< points dropped before fitting

  double evaluate(double x) const {
    switch (model) {
      case FitModel::quadratic: return (params[0] * x + params[1]) * x + params[2];
      case FitModel::inverted_exponential: return 1.0 - std::exp(-params[0] * (x - params[1]));
      case FitModel::linear: return params[0] * x + params[1];
    }
    return 0.0;
  }
};

namespace detail {

inline void require_same_size(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw FitError("x and y have different lengths");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw FitError("non-finite data point");
}

inline std::size_t distinct_count(std::span<const double> x) { return std::set<double>(x.begin(), x.end()).size(); }

inline double r_squared(std::span<const double> y, std::span<const double> residuals) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_tot += (y[i] - mean) * (y[i] - mean);
    ss_res += residuals[i] * residuals[i];
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

// Polynomial least squares with columns x^degree, ..., x, 1.
inline FitResult polynomial_fit(std::span<const double> x, std::span<const double> y, int degree, FitModel model) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, degree + 1);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j <= degree; ++j) design(i, j) = std::pow(x[i], degree - j);
    rhs(i) = y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < degree + 1) throw FitError("rank-deficient design matrix");
  const Eigen::VectorXd coef = qr.solve(rhs);

  FitResult out;
  out.model = model;
  out.params.assign(coef.data(), coef.data() + coef.size());
  out.n_points = x.size();
  for (Eigen::Index i = 0; i < n; ++i) out.residuals.push_back(y[i] - design.row(i).dot(coef));
  out.r_squared = r_squared(y, out.residuals);
  return out;
}

}  // namespace detail

inline FitResult fit_linear(std::span<const double> x, std::span<const double> y) {
  detail::require_same_size(x, y);
  if (detail::distinct_count(x) < 2) throw FitError("linear fit needs at least two distinct x values");
  return detail::polynomial_fit(x, y, 1, FitModel::linear);
}

inline FitResult fit_quadratic(std::span<const double> x, std::span<const double> y) {
  detail::require_same_size(x, y);
  if (x.size() < 3) throw FitError("quadratic fit needs at least three points");
  if (detail::distinct_count(x) < 3) throw FitError("quadratic fit needs at least three distinct x values");
  return detail::polynomial_fit(x, y, 2, FitModel::quadratic);
}

/// F = 1 - exp(-a (p - b)). Points with F >= 1 are dropped (counted in `excluded`).
/// Start from the straight-line fit of log(1 - F) = -a p + a b, then refine with Gauss-Newton.
inline FitResult fit_inverted_exponential(std::span<const double> x, std::span<const double> y) {
  detail::require_same_size(x, y);
  std::vector<double> px, py, log_gap;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] >= 1.0) continue;
    px.push_back(x[i]);
    py.push_back(y[i]);
    log_gap.push_back(std::log1p(-y[i]));
  }
  if (px.size() < 2) throw FitError("inverted exponential fit needs at least two points with F < 1");
  if (detail::distinct_count(px) < 2) throw FitError("inverted exponential fit needs two distinct x values");

  const FitResult start = detail::polynomial_fit(px, log_gap, 1, FitModel::linear);
  double a = -start.params[0];
  if (a == 0.0) throw FitError("inverted exponential fit: zero rate");
  double b = start.params[1] / a;

  const auto n = static_cast<Eigen::Index>(px.size());
  auto sse = [&](double aa, double bb) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = py[i] - (1.0 - std::exp(-aa * (px[i] - bb)));
      s += r * r;
    }
    return s;
  };
  double current = sse(a, b);
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::MatrixXd jac(n, 2);
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double e = std::exp(-a * (px[i] - b));
      r(i) = py[i] - (1.0 - e);
      jac(i, 0) = (px[i] - b) * e;  // d model / d a
      jac(i, 1) = -a * e;           // d model / d b
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
    if (qr.rank() < 2) break;
    const Eigen::Vector2d step = qr.solve(r);
    double scale = 1.0;
    bool improved = false;
    for (int h = 0; h < 30; ++h, scale *= 0.5) {
      const double trial = sse(a + scale * step(0), b + scale * step(1));
      if (trial < current) {
        a += scale * step(0);
        b += scale * step(1);
        improved = current - trial > 1e-15 * std::max(current, 1e-300);
        current = trial;
        break;
      }
    }
    if (!improved || step.cwiseAbs().maxCoeff() < 1e-14 * (1.0 + std::abs(a) + std::abs(b))) break;
  }

  FitResult out;
  out.model = FitModel::inverted_exponential;
  out.params = {a, b};
  out.n_points = px.size();
  out.excluded = x.size() - px.size();
  for (Eigen::Index i = 0; i < n; ++i) out.residuals.push_back(py[i] - out.evaluate(px[i]));
  out.r_squared = detail::r_squared(py, out.residuals);
  return out;
}

inline FitResult fit(FitModel model, std::span<const double> x, std::span<const double> y) {
  switch (model) {
    case FitModel::quadratic: return fit_quadratic(x, y);
    case FitModel::inverted_exponential: return fit_inverted_exponential(x, y);
    case FitModel::linear: return fit_linear(x, y);
  }
  throw FitError("unknown model");
}

}  // namespace xyqaoa
