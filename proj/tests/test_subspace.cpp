#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.hpp"
#include "xyqaoa/subspace.hpp"

using namespace xyqaoa;
constexpr double pi = std::numbers::pi;

TEST(BuildHb, TwoSites) {
  const Eigen::MatrixXd h = build_hb(2);
  Eigen::MatrixXd expected(2, 2);
  expected << 0, 2, 2, 0;
  EXPECT_EQ(h, expected);
}

TEST(BuildHb, ThreeSitesTridiagonal) {
  Eigen::MatrixXd expected(3, 3);
  expected << 0, 2, 0, 2, 0, 2, 0, 2, 0;
  EXPECT_EQ(build_hb(3), expected);
}

TEST(BuildHb, SymmetricForAllSizes) {
  for (std::size_t n = 2; n <= 20; ++n) {
    const Eigen::MatrixXd h = build_hb(n);
    EXPECT_EQ(h, h.transpose()) << "N=" << n;
  }
}

TEST(BuildHb, RejectsShortChain) {
  EXPECT_THROW(build_hb(1), InvalidDimension);
  EXPECT_THROW(build_hb(0), InvalidDimension);
}

TEST(DiagonalizeHb, TwoSiteEigenvalues) {
  const auto s = diagonalize_hb(2);
  EXPECT_NEAR(s.eigenvalues(0), -2.0, 1e-14);
  EXPECT_NEAR(s.eigenvalues(1), 2.0, 1e-14);
}

TEST(DiagonalizeHb, ThreeSiteEigenvalues) {
  // det(H - x) = -x^3 + 8x  ->  x in {-2 sqrt 2, 0, 2 sqrt 2}
  const auto s = diagonalize_hb(3);
  EXPECT_NEAR(s.eigenvalues(0), -2.0 * std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(s.eigenvalues(1), 0.0, 1e-13);
  EXPECT_NEAR(s.eigenvalues(2), 2.0 * std::sqrt(2.0), 1e-13);
}

TEST(DiagonalizeHb, InvariantsAndSymmetricSpectrum) {
  for (std::size_t n = 2; n <= 20; ++n) {
    const auto s = diagonalize_hb(n);
    const auto k = static_cast<Eigen::Index>(n);
    const Eigen::MatrixXd& v = s.eigenvectors;
    EXPECT_LT((v.transpose() * v - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((v * s.eigenvalues.asDiagonal() * v.transpose() - build_hb(n)).cwiseAbs().maxCoeff(), 1e-10);
    for (Eigen::Index i = 0; i < k; ++i) {
      EXPECT_NEAR(s.eigenvalues(i), -s.eigenvalues(k - 1 - i), 1e-12) << "N=" << n;
      if (i > 0) {
        EXPECT_LE(s.eigenvalues(i - 1), s.eigenvalues(i));
      }
    }
  }
}

TEST(EvolveB, ZeroDurationIsIdentity) {
  const auto spect = diagonalize_hb(5);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(5);
  for (auto& z : v) z = {g(rng), g(rng)};
  v.normalize();
  const ExcitationVector state(v);
  EXPECT_LT((evolve_b(state, 0.0, spect).amplitudes() - v).norm(), 1e-14);
}

TEST(EvolveB, TwoSiteClosedForm) {
  // exp(-i [[0,2],[2,0]] d)|1> = (cos 2d, -i sin 2d)
  const auto spect = diagonalize_hb(2);
  const auto one = ExcitationVector::basis(2, 1);
  const auto quarter = evolve_b(one, pi / 4, spect);
  EXPECT_NEAR(std::abs(quarter.amplitude(1)), 0.0, 1e-14);
  EXPECT_NEAR(quarter.amplitude(2).real(), 0.0, 1e-14);
  EXPECT_NEAR(quarter.amplitude(2).imag(), -1.0, 1e-14);
  EXPECT_NEAR(quarter.population(2), 1.0, 1e-14);

  const auto eighth = evolve_b(one, pi / 8, spect);
  EXPECT_NEAR(eighth.population(2), 0.5, 1e-14);

  for (double d : {0.1, 0.37, 1.9, 5.0}) {
    const auto s = evolve_b(one, d, spect);
    EXPECT_NEAR(s.amplitude(1).real(), std::cos(2 * d), 1e-13);
    EXPECT_NEAR(s.amplitude(2).imag(), -std::sin(2 * d), 1e-13);
  }
}

TEST(EvolveB, DimensionMismatchThrows) {
  const auto spect = diagonalize_hb(3);
  EXPECT_THROW(evolve_b(ExcitationVector::basis(4, 1), 0.1, spect), InvalidDimension);
}

TEST(EvolveC, PhasesOnlyTheTarget) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(3);
  v(0) = 0.6;
  v(2) = 0.8;
  const ExcitationVector s(v);
  const auto flipped = evolve_c(s, pi);
  EXPECT_NEAR(flipped.amplitude(3).real(), -0.8, 1e-15);
  EXPECT_NEAR(flipped.amplitude(3).imag(), 0.0, 1e-15);
  EXPECT_EQ(flipped.amplitude(1), Complex(0.6));

  EXPECT_LT((evolve_c(s, 2 * pi).amplitudes() - v).norm(), 1e-15);
  EXPECT_LT((evolve_c(evolve_c(s, pi), pi).amplitudes() - v).norm(), 1e-15);

  const auto basis_n = evolve_c(ExcitationVector::basis(4, 4), pi);
  EXPECT_NEAR(basis_n.amplitude(4).real(), -1.0, 1e-15);
}

TEST(ApplySchedule, EmptyScheduleIsInitialState) {
  const auto s = apply_schedule(Schedule{}, 6);
  EXPECT_EQ(s.amplitude(1), Complex(1.0));
  EXPECT_EQ(fidelity(Schedule{}, 6), 0.0);
}

TEST(ApplySchedule, TwoSiteQuarterPeriodTransfers) {
  for (double phase : {0.0, 0.4, 3.0}) {
    const Schedule s({{pi / 4, phase}});
    EXPECT_NEAR(apply_schedule(s, 2).population(2), 1.0, 1e-14);
    EXPECT_NEAR(fidelity(s, 2), 1.0, 1e-14);
  }
}

TEST(ApplySchedule, NoHoppingNeverMoves) {
  for (std::size_t n = 2; n <= 8; ++n) {
    const Schedule s({{0.0, 0.7}, {0.0, 1.3}, {0.0, 2.0}});
    const auto out = apply_schedule(s, n);
    EXPECT_NEAR(std::abs(out.amplitude(1)), 1.0, 1e-15);
    EXPECT_EQ(fidelity(s, n), 0.0);
  }
}

TEST(ApplySchedule, UnitaryForRandomSchedules) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 19;
    const auto s = test::random_schedule(rng, 1 + trial % 10, 4.0);
    EXPECT_NEAR(apply_schedule(s, n).norm(), 1.0, 1e-12);
  }
}

TEST(ApplySchedule, TimeReversalRestoresInitialState) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 12;
    const auto s = test::random_schedule(rng, 1 + trial % 6, 3.0);
    const auto spect = diagonalize_hb(n);
    ExcitationVector psi = apply_schedule(s, n);
    for (std::size_t k = s.depth(); k-- > 0;) {
      psi = evolve_c(psi, -s[k].phase);
      psi = evolve_b(psi, -s[k].hop, spect);
    }
    EXPECT_NEAR(std::abs(psi.amplitude(1) - Complex(1.0)), 0.0, 1e-10);
  }
}

TEST(FidelityGradient, ZeroScheduleIsStationary) {
  for (std::size_t n = 3; n <= 8; ++n) {
    const Schedule s({{0, 0}, {0, 0}, {0, 0}});
    for (double g : fidelity_gradient(s, n)) EXPECT_NEAR(g, 0.0, 1e-14);
  }
}

TEST(FidelityGradient, TwoSiteMaximumHasZeroSlope) {
  const auto g = fidelity_gradient(Schedule({{pi / 4, 0.3}}), 2);
  EXPECT_NEAR(g[0], 0.0, 1e-13);
  EXPECT_NEAR(g[1], 0.0, 1e-13);
  // Away from the maximum: d/dd sin^2(2d) = 2 sin(4d)
  EXPECT_NEAR(fidelity_gradient(Schedule({{0.3, 0.0}}), 2)[0], 2.0 * std::sin(1.2), 1e-12);
}

namespace {

std::vector<double> central_difference(const Schedule& s, std::size_t n, double h) {
  auto flat = s.flat();
  std::vector<double> out(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) {
    auto up = flat, down = flat;
    up[i] += h;
    down[i] -= h;
    const SubspaceSimulator sim(n);
    out[i] = (sim.fidelity(up) - sim.fidelity(down)) / (2 * h);
  }
  return out;
}

}  // namespace

TEST(FidelityGradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = trial == 0 ? 5 : 2 + trial % 9;
    const std::size_t p = trial == 0 ? 3 : 1 + trial % 8;
    const auto s = test::random_schedule(rng, p, 1.0);
    const auto adj = fidelity_gradient(s, n);
    const auto fd = central_difference(s, n, 1e-6);
    for (std::size_t i = 0; i < adj.size(); ++i) {
      const double tol = std::max(1e-6 * std::abs(fd[i]), 1e-9);
      EXPECT_NEAR(adj[i], fd[i], tol) << "N=" << n << " p=" << p << " i=" << i;
    }
  }
}
