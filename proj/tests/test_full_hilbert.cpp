#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.hpp"
#include "xyqaoa/full_hilbert.hpp"
#include "xyqaoa/subspace.hpp"

using namespace xyqaoa;

TEST(FullHilbert, BasisIndexing) {
  const auto psi = full_hilbert_basis(4, 0b0100);
  EXPECT_EQ(psi.size(), 16U);
  EXPECT_EQ(psi[4], std::complex<double>(1.0));
  EXPECT_DOUBLE_EQ(excitation_sector_population(psi, 1), 1.0);
  EXPECT_DOUBLE_EQ(total_sz_expectation(psi, 4), -2.0);
}

TEST(FullHilbert, SizeLimits) {
  EXPECT_THROW(full_hilbert_basis(1, 0), InvalidDimension);
  EXPECT_THROW(full_hilbert_basis(kMaxFullHilbertSites + 1, 0), ResourceLimit);
  EXPECT_THROW(full_hilbert_oracle(Schedule{}, 13), ResourceLimit);
}

TEST(FullHilbert, TwoSiteQuarterPeriod) {
  const Schedule s({{std::numbers::pi / 4, 0.0}});
  EXPECT_NEAR(full_hilbert_oracle(s, 2), 1.0, 1e-12);
}

TEST(FullHilbert, VacuumAndFullyPolarizedAreStationary) {
  std::mt19937_64 rng(2);
  const auto s = test::random_schedule(rng, 3);
  const auto vac = full_hilbert_evolve(full_hilbert_basis(5, 0), s, 5);
  EXPECT_NEAR(std::norm(vac[0]), 1.0, 1e-12);
  const auto full = full_hilbert_evolve(full_hilbert_basis(5, 31), s, 5);
  EXPECT_NEAR(std::norm(full[31]), 1.0, 1e-12);
}

TEST(FullHilbert, ExcitationNumberConserved) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::uint64_t> pick(0, 63);
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint64_t x = pick(rng);
    const auto s = test::random_schedule(rng, 1 + trial % 4);
    const auto psi = full_hilbert_evolve(full_hilbert_basis(6, x), s, 6);
    const int k = std::popcount(x);
    EXPECT_NEAR(excitation_sector_population(psi, k), 1.0, 1e-11);
    EXPECT_NEAR(total_sz_expectation(psi, 6), 2.0 * k - 6.0, 1e-10);
  }
}

TEST(FullHilbert, AgreesWithSubspaceOnRandomSchedules) {
  std::mt19937_64 rng(101);
  for (std::size_t n = 2; n <= 8; ++n) {
    for (int trial = 0; trial < 15; ++trial) {
      const auto s = test::random_schedule(rng, 1 + trial % 6, 2.0);
      EXPECT_NEAR(fidelity(s, n), full_hilbert_oracle(s, n), 1e-10) << "N=" << n;
    }
  }
}

TEST(FullHilbert, AgreesWithSubspaceAmplitudes) {
  std::mt19937_64 rng(55);
  const std::size_t n = 5;
  const auto s = test::random_schedule(rng, 4);
  const auto full = full_hilbert_evolve(full_hilbert_basis(n, 1), s, n);
  const auto sub = apply_schedule(s, n);
  for (std::size_t site = 1; site <= n; ++site)
    EXPECT_NEAR(std::abs(full[std::size_t{1} << (site - 1)] - sub.amplitude(site)), 0.0, 1e-10);
}
