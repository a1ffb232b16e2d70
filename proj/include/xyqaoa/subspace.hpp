#pragma once

// Exact QAOA evolution of the XY chain restricted to the single-excitation
// sector {|1>, ..., |N>}. Both Hamiltonians conserve the excitation number and
// act trivially on the vacuum, so the vacuum amplitude is never stored: the
// transfer fidelity only depends on the N-dimensional block.
//
// Conventions: open chain, H_B has zero diagonal and 2 on both off-diagonals;
// H_C is the projector onto site N (the identity part of (Z_N + I)/2 is absent
// in this sector).

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "xyqaoa/error.hpp"
#include "xyqaoa/schedule.hpp"

namespace xyqaoa {

using Complex = std::complex<double>;

inline void require_chain_length(std::size_t n_sites) {
  if (n_sites < 2) throw InvalidDimension("chain needs at least 2 sites, got " + std::to_string(n_sites));
}

/// Hopping Hamiltonian in the single-excitation basis.
inline Eigen::MatrixXd build_hb(std::size_t n_sites) {
  require_chain_length(n_sites);
  const auto n = static_cast<Eigen::Index>(n_sites);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = 2.0;
    h(i + 1, i) = 2.0;
  }
  return h;
}

/// Eigenpairs of H_B, ascending. Column k of `eigenvectors` pairs with `eigenvalues[k]`.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  std::size_t n_sites() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

inline SpectralDecomposition diagonalize_hb(std::size_t n_sites) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(build_hb(n_sites));
  if (solver.info() != Eigen::Success) throw std::runtime_error("diagonalize_hb: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Process-wide immutable decomposition per chain length.
inline std::shared_ptr<const SpectralDecomposition> shared_spectrum(std::size_t n_sites) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const SpectralDecomposition>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n_sites];
  if (!slot) slot = std::make_shared<const SpectralDecomposition>(diagonalize_hb(n_sites));
  return slot;
}

/// Amplitudes over the single-excitation basis; site indices are 1-based in the API.
class ExcitationVector {
 public:
  explicit ExcitationVector(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {
    require_chain_length(static_cast<std::size_t>(amplitudes_.size()));
  }

  static ExcitationVector basis(std::size_t n_sites, std::size_t site) {
    require_chain_length(n_sites);
    if (site < 1 || site > n_sites) throw InvalidDimension("basis site out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_sites));
    v(static_cast<Eigen::Index>(site - 1)) = 1.0;
    return ExcitationVector(std::move(v));
  }

  std::size_t n_sites() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t site) const {
    if (site < 1 || site > n_sites()) throw InvalidDimension("site out of range");
    return amplitudes_(static_cast<Eigen::Index>(site - 1));
  }
  double population(std::size_t site) const { return std::norm(amplitude(site)); }
  double norm() const { return amplitudes_.norm(); }

 private:
  Eigen::VectorXcd amplitudes_;
};

namespace detail {

inline void hop_in_place(Eigen::VectorXcd& psi, double delta, const SpectralDecomposition& spect) {
  if (delta == 0.0) return;
  const Eigen::MatrixXd& v = spect.eigenvectors;
  Eigen::VectorXcd modes = v.transpose() * psi;
  for (Eigen::Index k = 0; k < modes.size(); ++k)
    modes(k) *= std::polar(1.0, -spect.eigenvalues(k) * delta);
  psi.noalias() = v * modes;
}

inline void phase_in_place(Eigen::VectorXcd& psi, double delta) {
  psi(psi.size() - 1) *= std::polar(1.0, -delta);
}

// H_B * psi using the tridiagonal structure.
inline Eigen::VectorXcd apply_hb(const Eigen::VectorXcd& psi) {
  const Eigen::Index n = psi.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    out(i) += 2.0 * psi(i + 1);
    out(i + 1) += 2.0 * psi(i);
  }
  return out;
}

}  // namespace detail

/// exp(-i H_B delta) state. A negative delta propagates backwards.
inline ExcitationVector evolve_b(const ExcitationVector& state, double delta, const SpectralDecomposition& spect) {
  if (spect.n_sites() != state.n_sites())
    throw InvalidDimension("evolve_b: spectrum has " + std::to_string(spect.n_sites()) + " sites, state has " +
                           std::to_string(state.n_sites()));
  Eigen::VectorXcd psi = state.amplitudes();
  detail::hop_in_place(psi, delta, spect);
  return ExcitationVector(std::move(psi));
}

/// exp(-i H_C delta) state: phases the amplitude on site N.
inline ExcitationVector evolve_c(const ExcitationVector& state, double delta) {
  Eigen::VectorXcd psi = state.amplitudes();
  detail::phase_in_place(psi, delta);
  return ExcitationVector(std::move(psi));
}

/// Schedule evaluator bound to one chain length. Cheap to copy; shares the spectrum.
class SubspaceSimulator {
 public:
  explicit SubspaceSimulator(std::size_t n_sites) : spect_(shared_spectrum(n_sites)) {}

  std::size_t n_sites() const { return spect_->n_sites(); }
  const SpectralDecomposition& spectrum() const { return *spect_; }

  /// U_p |1> for flat durations (hop_1, phase_1, ...).
  Eigen::VectorXcd final_state(std::span<const double> flat) const {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_sites()));
    psi(0) = 1.0;
    for (std::size_t k = 0; k + 1 < flat.size(); k += 2) {
      detail::hop_in_place(psi, flat[k], *spect_);
      detail::phase_in_place(psi, flat[k + 1]);
    }
    return psi;
  }

  double fidelity(std::span<const double> flat) const {
    const Eigen::VectorXcd psi = final_state(flat);
    return std::norm(psi(psi.size() - 1));
  }

  /// Fidelity plus exact gradient by backpropagating <N| through the circuit.
  double fidelity_and_gradient(std::span<const double> flat, std::span<double> grad) const {
    if (grad.size() != flat.size() || flat.size() % 2 != 0)
      throw InvalidDimension("fidelity_and_gradient: gradient buffer must match an even duration list");
    const std::size_t depth = flat.size() / 2;
    const auto n = static_cast<Eigen::Index>(n_sites());

    // after_hop[k] = state right after the k-th hop, after_phase[k] right after the k-th phase.
    std::vector<Eigen::VectorXcd> after_hop(depth), after_phase(depth);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
    psi(0) = 1.0;
    for (std::size_t k = 0; k < depth; ++k) {
      detail::hop_in_place(psi, flat[2 * k], *spect_);
      after_hop[k] = psi;
      detail::phase_in_place(psi, flat[2 * k + 1]);
      after_phase[k] = psi;
    }
    const Complex amp = psi(n - 1);

    Eigen::VectorXcd lambda = Eigen::VectorXcd::Zero(n);
    lambda(n - 1) = 1.0;
    const Complex minus_i(0.0, -1.0);
    for (std::size_t k = depth; k-- > 0;) {
      const Complex d_phase = minus_i * std::conj(lambda(n - 1)) * after_phase[k](n - 1);
      grad[2 * k + 1] = 2.0 * std::real(std::conj(amp) * d_phase);
      detail::phase_in_place(lambda, -flat[2 * k + 1]);

      const Complex d_hop = minus_i * lambda.dot(detail::apply_hb(after_hop[k]));
      grad[2 * k] = 2.0 * std::real(std::conj(amp) * d_hop);
      detail::hop_in_place(lambda, -flat[2 * k], *spect_);
    }
    return std::norm(amp);
  }

 private:
  std::shared_ptr<const SpectralDecomposition> spect_;
};

/// U_p |1>, each iteration hop first then phase.
inline ExcitationVector apply_schedule(const Schedule& schedule, std::size_t n_sites) {
  const auto flat = schedule.flat();
  return ExcitationVector(SubspaceSimulator(n_sites).final_state(flat));
}

/// |<N| U_p |1>|^2.
inline double fidelity(const Schedule& schedule, std::size_t n_sites) {
  const auto flat = schedule.flat();
  return SubspaceSimulator(n_sites).fidelity(flat);
}

/// dF/d(hop_k), dF/d(phase_k) interleaved, length 2p.
inline std::vector<double> fidelity_gradient(const Schedule& schedule, std::size_t n_sites) {
  const auto flat = schedule.flat();
  std::vector<double> grad(flat.size());
  SubspaceSimulator(n_sites).fidelity_and_gradient(flat, grad);
  return grad;
}

}  // namespace xyqaoa
