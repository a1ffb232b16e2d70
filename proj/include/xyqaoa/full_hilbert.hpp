#pragma once

// Dense 2^N reference simulator. Independent of the subspace path: no
// eigensolver, the XX+YY terms act directly on bit patterns and exp(-iHt) is a
// sub-stepped Taylor series. Site n (1-based) is bit n-1; a set bit is the
// excited (+1 eigenvalue of Z) state, so |n> is the basis index 1 << (n-1).

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "xyqaoa/error.hpp"
#include "xyqaoa/schedule.hpp"

namespace xyqaoa {

inline constexpr std::size_t kMaxFullHilbertSites = 12;

using FullState = std::vector<std::complex<double>>;

namespace detail {

inline void require_full_hilbert_size(std::size_t n_sites) {
  if (n_sites < 2) throw InvalidDimension("full Hilbert simulation needs at least 2 sites");
  if (n_sites > kMaxFullHilbertSites)
    throw ResourceLimit("full Hilbert simulation capped at " + std::to_string(kMaxFullHilbertSites) + " sites, got " +
                        std::to_string(n_sites));
}

// out = sum_i (X_i X_{i+1} + Y_i Y_{i+1}) in. Each term maps |01> <-> |10> with weight 2.
inline void apply_xy_chain(const FullState& in, FullState& out, std::size_t n_sites) {
  std::fill(out.begin(), out.end(), std::complex<double>{});
  for (std::uint64_t x = 0; x < in.size(); ++x) {
    if (in[x] == std::complex<double>{}) continue;
    for (std::size_t i = 0; i + 1 < n_sites; ++i) {
      const std::uint64_t a = (x >> i) & 1U;
      const std::uint64_t b = (x >> (i + 1)) & 1U;
      if (a != b) out[x ^ (std::uint64_t{3} << i)] += 2.0 * in[x];
    }
  }
}

inline double l2_norm(const FullState& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

inline void xy_chain_propagate(FullState& psi, double t, std::size_t n_sites) {
  if (t == 0.0) return;
  // ||H_B|| <= 2 (N-1); keep ||H h|| <= 1/2 per step.
  const double bound = 2.0 * static_cast<double>(n_sites - 1);
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(t) * bound / 0.5));
  const double h = t / static_cast<double>(steps);
  FullState term(psi.size()), next(psi.size());
  for (std::size_t s = 0; s < steps; ++s) {
    term = psi;
    for (int order = 1; order < 60; ++order) {
      apply_xy_chain(term, next, n_sites);
      const std::complex<double> factor(0.0, -h / order);
      for (std::size_t x = 0; x < next.size(); ++x) next[x] *= factor;
      term.swap(next);
      for (std::size_t x = 0; x < psi.size(); ++x) psi[x] += term[x];
      if (l2_norm(term) < 1e-18) break;
    }
  }
}

inline void target_phase(FullState& psi, double t, std::size_t n_sites) {
  const std::uint64_t mask = std::uint64_t{1} << (n_sites - 1);
  const std::complex<double> phase = std::polar(1.0, -t);
  for (std::uint64_t x = 0; x < psi.size(); ++x)
    if (x & mask) psi[x] *= phase;
}

}  // namespace detail

inline FullState full_hilbert_basis(std::size_t n_sites, std::uint64_t index) {
  detail::require_full_hilbert_size(n_sites);
  FullState psi(std::size_t{1} << n_sites);
  psi.at(index) = 1.0;
  return psi;
}

/// Runs the schedule on an arbitrary 2^N state; H_C = (Z_N + I)/2.
inline FullState full_hilbert_evolve(FullState psi, const Schedule& schedule, std::size_t n_sites) {
  detail::require_full_hilbert_size(n_sites);
  if (psi.size() != (std::size_t{1} << n_sites)) throw InvalidDimension("full Hilbert state has wrong size");
  for (const auto& d : schedule.pairs()) {
    detail::xy_chain_propagate(psi, d.hop, n_sites);
    detail::target_phase(psi, d.phase, n_sites);
  }
  return psi;
}

/// |<N| U_p |1>|^2 computed in the full 2^N space.
inline double full_hilbert_oracle(const Schedule& schedule, std::size_t n_sites) {
  detail::require_full_hilbert_size(n_sites);
  const FullState psi = full_hilbert_evolve(full_hilbert_basis(n_sites, 1), schedule, n_sites);
  return std::norm(psi[std::size_t{1} << (n_sites - 1)]);
}

/// Probability of finding exactly `excitations` set bits.
inline double excitation_sector_population(const FullState& psi, int excitations) {
  double s = 0.0;
  for (std::uint64_t x = 0; x < psi.size(); ++x)
    if (std::popcount(x) == excitations) s += std::norm(psi[x]);
  return s;
}

/// <sum_i Z_i>, with Z = +1 on a set bit.
inline double total_sz_expectation(const FullState& psi, std::size_t n_sites) {
  double s = 0.0;
  for (std::uint64_t x = 0; x < psi.size(); ++x) {
    const int up = std::popcount(x);
    s += std::norm(psi[x]) * static_cast<double>(2 * up - static_cast<int>(n_sites));
  }
  return s;
}

}  // namespace xyqaoa
