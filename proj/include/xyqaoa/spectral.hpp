#pragma once

// Analytic side of the fixed-angle Grover-like ansatz
//   U_p = (exp(-i pi |N><N|) exp(-i H_B delta))^p
// built on the boundary transition amplitudes f_1N and f_NN.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "xyqaoa/error.hpp"
#include "xyqaoa/subspace.hpp"

namespace xyqaoa {

struct TransitionAmplitudes {
  Complex f_1N;  ///< <N| exp(-i H_B delta) |1>
  Complex f_NN;  ///< <N| exp(-i H_B delta) |N>
  double delta = 0.0;
};

/// Exact boundary amplitudes from the eigendecomposition (no small-delta expansion).
inline TransitionAmplitudes transition_amplitudes(const SpectralDecomposition& spect, double delta) {
  const auto n = static_cast<Eigen::Index>(spect.n_sites());
  const Eigen::MatrixXd& v = spect.eigenvectors;
  Complex f1n{}, fnn{};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex phase = std::polar(1.0, -spect.eigenvalues(k) * delta);
    f1n += v(n - 1, k) * v(0, k) * phase;
    fnn += v(n - 1, k) * v(n - 1, k) * phase;
  }
  return {f1n, fnn, delta};
}

inline TransitionAmplitudes transition_amplitudes(std::size_t n_sites, double delta) {
  return transition_amplitudes(*shared_spectrum(n_sites), delta);
}

// ---------------------------------------------------------------------------
// Eigenvector formulas

enum class EigenFormula {
  numerical,     ///< columns of diagonalize_hb
  sine_modes,    ///< sqrt(2/(N+1)) sin(nk pi/(N+1)), E_k = 4 cos(k pi/(N+1)), 1 <= k <= N
  half_lattice,  ///< even/odd sublattice form indexed by N/2 and N/4+1, E_k = 2 cos(k pi/(N/2+1)), N even, 1 <= k <= N/2
};

struct Eigenpair {
  Eigen::VectorXd vector;
  double value = 0.0;
};

inline Eigenpair eigenpair_from_formula(std::size_t n_sites, std::size_t k, EigenFormula formula) {
  require_chain_length(n_sites);
  const auto n = static_cast<Eigen::Index>(n_sites);
  const double nd = static_cast<double>(n_sites);
  const double kd = static_cast<double>(k);
  constexpr double pi = std::numbers::pi;
  Eigenpair out{Eigen::VectorXd::Zero(n), 0.0};

  switch (formula) {
    case EigenFormula::numerical: {
      if (k < 1 || k > n_sites) throw InvalidDimension("eigenpair index out of range");
      const auto spect = shared_spectrum(n_sites);
      out.vector = spect->eigenvectors.col(static_cast<Eigen::Index>(k - 1));
      out.value = spect->eigenvalues(static_cast<Eigen::Index>(k - 1));
      break;
    }
    case EigenFormula::sine_modes: {
      if (k < 1 || k > n_sites) throw InvalidDimension("eigenpair index out of range");
      const double scale = std::sqrt(2.0 / (nd + 1.0));
      for (Eigen::Index site = 1; site <= n; ++site)
        out.vector(site - 1) = scale * std::sin(static_cast<double>(site) * kd * pi / (nd + 1.0));
      out.value = 4.0 * std::cos(kd * pi / (nd + 1.0));
      break;
    }
    case EigenFormula::half_lattice: {
      if (n_sites % 2 != 0) throw InvalidDimension("half-lattice eigenvector formula needs even N");
      if (k < 1 || k > n_sites / 2) throw InvalidDimension("half-lattice eigenvector index must be in [1, N/2]");
      const double half = nd / 2.0;
      const double quarter = nd / 4.0 + 1.0;
      const double scale = 1.0 / std::sqrt(half);
      for (std::size_t m = 1; m <= n_sites / 2; ++m) {
        const double md = static_cast<double>(m);
        out.vector(static_cast<Eigen::Index>(2 * m - 1)) += scale * std::sin(kd * md * pi / quarter);
        out.vector(static_cast<Eigen::Index>(2 * m - 2)) += scale * std::sin(kd * (md + 0.5) * pi / quarter);
      }
      out.value = 2.0 * std::cos(kd * pi / (half + 1.0));
      break;
    }
  }
  return out;
}

/// ||H_B v - E v|| for the k-th eigenpair produced by `formula`.
inline double eigenstate_residual(std::size_t n_sites, std::size_t k, EigenFormula formula) {
  const Eigenpair pair = eigenpair_from_formula(n_sites, k, formula);
  return (build_hb(n_sites) * pair.vector - pair.value * pair.vector).norm();
}

// ---------------------------------------------------------------------------
// Small-delta closed forms f_1N ~ -i F(N) delta, f_NN ~ -i G(N) delta

struct ScalingCoefficients {
  double transfer = 0.0;  ///< F(N)
  double retention = 0.0; ///< G(N)
  std::size_t n_sites = 0;
  /// The F(N) expression divides by sin of an argument that is a multiple of pi.
  bool transfer_singular = false;
  bool retention_singular = false;
};

namespace detail {

struct CscTerm {
  double value;
  bool singular;
};

inline CscTerm csc(double arg) {
  const double s = std::sin(arg);
  return {1.0 / s, std::abs(s) < 1e-9};
}

}  // namespace detail

/// Evaluates the closed-form expressions for F(N) and G(N) term by term, as written,
/// and flags any cosecant taken at a multiple of pi.
inline ScalingCoefficients closed_form_coefficients(std::size_t n_sites) {
  require_chain_length(n_sites);
  constexpr double pi = std::numbers::pi;
  const double n = static_cast<double>(n_sites);
  const double h = n / 2.0;
  const double q = n / 4.0 + 1.0;
  ScalingCoefficients out;
  out.n_sites = n_sites;

  {
    const auto c = detail::csc((pi * h + 2.0 * pi) / (2.0 * q));
    const double bracket = std::cos((2.0 * pi * h * h + 4.0 * pi * h + pi) / (2.0 * q)) * c.value +
                           std::cos(pi / (2.0 * q)) * c.value;
    out.transfer = bracket / (2.0 * std::sqrt(n + 1.0));
    out.transfer_singular = c.singular || !std::isfinite(out.transfer);
  }

  {
    const double d = 2.0 * (n + 1.0);
    const auto c1 = detail::csc(pi * n / (n + 1.0));
    const auto c2 = detail::csc(pi / d);
    const auto c3 = detail::csc((pi - 2.0 * pi) / d);
    const auto c4 = detail::csc((pi - 2.0 * pi * n) / d);
    const auto c5 = detail::csc((2.0 * pi * n + pi) / d);

    const double first = 0.5 * (-std::cos((4.0 * pi * n * n + pi * n - pi) / d) * c1.value + 2.0 * n +
                                std::cos(pi * (n - 1.0) / d) * c1.value);
    const double second = std::cos(pi * n / d) * c2.value + std::cos(pi * (n + 2.0) / d) * c2.value;
    const double third = std::cos(3.0 * pi * n / d) * c3.value - std::cos((-4.0 * pi * n * n - pi * n) / d) * c4.value;
    const double fourth = std::cos(pi * n / d) * c5.value - std::cos((4.0 * pi * n * n + 3.0 * pi * n) / d) * c5.value;
    const double braces = first * second - third - fourth;
    // f_NN ~ (i delta / (2 sqrt(N+1))) {...} = -i G delta
    out.retention = -braces / (2.0 * std::sqrt(n + 1.0));
    out.retention_singular =
        c1.singular || c2.singular || c3.singular || c4.singular || c5.singular || !std::isfinite(out.retention);
  }
  return out;
}

/// |f_1N(delta)| / delta, the numerically measured first-order transfer slope.
inline double measured_transfer_slope(std::size_t n_sites, double delta = 1e-4) {
  return std::abs(transition_amplitudes(n_sites, delta).f_1N) / delta;
}

/// Amplitude series coefficient A_order of the low-depth expansion (order >= 3 uses the asymptotic form).
inline Complex series_coefficient(const ScalingCoefficients& c, int depth, int order) {
  const double p = depth;
  if (order < 1) throw InvalidDimension("series order starts at 1");
  if (order == 1) return {0.0, -p * c.transfer};
  if (order == 2) return {-c.transfer * c.retention * p * (p + 1.0) * (p + 2.0) / 3.0, 0.0};
  return {-c.transfer * std::pow(c.retention, order) * std::pow(p, 2.0 * order - 1.0), 0.0};
}

struct LowDepthTerms {
  double linear = 0.0;   ///< (p+1)^2 F^2 delta^2
  double geometric = 0.0;  ///< resummed higher-order contribution
  double total() const { return linear + geometric; }
};

inline LowDepthTerms low_depth_terms(const ScalingCoefficients& c, int depth, double delta) {
  const double p = depth;
  const double f2 = c.transfer * c.transfer;
  LowDepthTerms out;
  out.linear = (p + 1.0) * (p + 1.0) * f2 * delta * delta;
  if (depth == 0) return out;
  const double x = c.retention * p * p * delta;
  double ratio;  // (x^p - 1) / (x^2 - 1)
  if (std::abs(x * x - 1.0) < 1e-12) {
    ratio = (x > 0.0 || depth % 2 == 0) ? p / 2.0 : std::numeric_limits<double>::infinity();
  } else {
    ratio = (std::pow(x, p) - 1.0) / (x * x - 1.0);
  }
  out.geometric = f2 * c.retention * c.retention * std::pow(p, 6) * std::pow(delta, 4) * ratio * ratio;
  return out;
}

/// Two-term low-depth success probability estimate.
inline double low_depth_prediction(const ScalingCoefficients& c, int depth, double delta) {
  return low_depth_terms(c, depth, delta).total();
}

inline double low_depth_prediction(std::size_t n_sites, int depth, double delta) {
  const auto c = closed_form_coefficients(n_sites);
  if (c.transfer_singular || c.retention_singular)
    throw SingularCoefficient("closed-form coefficients are singular for N=" + std::to_string(n_sites));
  return low_depth_prediction(c, depth, delta);
}

/// Grover-like step count 1 / (delta F).
inline double grover_step_estimate(double transfer_coefficient, double delta) {
  if (!(delta > 0.0)) throw InvalidConstraint("grover_step_estimate: delta must be positive");
  if (transfer_coefficient == 0.0 || !std::isfinite(transfer_coefficient))
    throw SingularCoefficient("grover_step_estimate: transfer coefficient is zero or non-finite");
  return 1.0 / (delta * std::abs(transfer_coefficient));
}

inline double grover_step_estimate(const ScalingCoefficients& c, double delta) {
  if (c.transfer_singular)
    throw SingularCoefficient("grover_step_estimate: transfer coefficient is singular for N=" +
                              std::to_string(c.n_sites));
  return grover_step_estimate(c.transfer, delta);
}

inline double grover_step_estimate(std::size_t n_sites, double delta) {
  return grover_step_estimate(closed_form_coefficients(n_sites), delta);
}

// ---------------------------------------------------------------------------
// The ansatz itself

/// Fidelity after each of the first `max_depth` ansatz iterations; entry 0 is depth 0.
inline std::vector<double> grover_ansatz_trace(std::size_t n_sites, int max_depth, double delta) {
  if (max_depth < 0) throw InvalidDimension("depth must be nonnegative");
  const SubspaceSimulator sim(n_sites);
  const auto n = static_cast<Eigen::Index>(n_sites);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
  psi(0) = 1.0;
  std::vector<double> out{std::norm(psi(n - 1))};
  for (int k = 0; k < max_depth; ++k) {
    detail::hop_in_place(psi, delta, sim.spectrum());
    psi(n - 1) = -psi(n - 1);
    out.push_back(std::norm(psi(n - 1)));
  }
  return out;
}

/// Direct simulation of p ansatz iterations from |1>.
inline double grover_ansatz_fidelity(std::size_t n_sites, int depth, double delta) {
  return grover_ansatz_trace(n_sites, depth, delta).back();
}

/// Smallest depth at which the ansatz fidelity reaches its first local maximum. Maxima below
/// `noise_floor` are round-off wiggles (long chains start near 1e-32) and are skipped.
inline std::optional<int> first_grover_peak_depth(std::size_t n_sites, double delta, int max_depth,
                                                  double noise_floor = 1e-12) {
  const auto f = grover_ansatz_trace(n_sites, max_depth + 1, delta);
  for (int p = 1; p <= max_depth; ++p)
    if (f[p] > noise_floor && f[p] > f[p - 1] && f[p] >= f[p + 1]) return p;
  return std::nullopt;
}

inline constexpr int kMaxPartitionDepth = 16;

/// Ansatz amplitude as a signed sum over compositions of p:
///   sum_j (-2)^(j-1) sum_{v_1+...+v_j=p} f_1N(v_1 delta) prod_{m>=2} f_NN(v_m delta)
inline double partition_sum_fidelity(std::size_t n_sites, int depth, double delta) {
  if (depth < 0) throw InvalidDimension("depth must be nonnegative");
  if (depth > kMaxPartitionDepth)
    throw ResourceLimit("partition sum capped at depth " + std::to_string(kMaxPartitionDepth));
  require_chain_length(n_sites);
  if (depth == 0) return 0.0;
  const auto spect = shared_spectrum(n_sites);
  std::vector<TransitionAmplitudes> f(static_cast<std::size_t>(depth) + 1);
  for (int m = 1; m <= depth; ++m) f[m] = transition_amplitudes(*spect, m * delta);

  // Bit g of `cuts` set means a block boundary after hop g+1.
  Complex amplitude{};
  const std::uint32_t compositions = std::uint32_t{1} << (depth - 1);
  for (std::uint32_t cuts = 0; cuts < compositions; ++cuts) {
    Complex term{1.0, 0.0};
    int block_start = 0;
    bool first = true;
    for (int pos = 1; pos <= depth; ++pos) {
      const bool boundary = pos == depth || ((cuts >> (pos - 1)) & 1U);
      if (!boundary) continue;
      const int length = pos - block_start;
      term *= first ? f[length].f_1N : -2.0 * f[length].f_NN;
      first = false;
      block_start = pos;
    }
    amplitude += term;
  }
  return std::norm(amplitude);
}

}  // namespace xyqaoa
