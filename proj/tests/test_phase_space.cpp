#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sqbench/fock.hpp"
#include "sqbench/phase_space.hpp"

using namespace sqbench;
using Eigen::Matrix2d;
using Eigen::Vector2d;

namespace {

void expect_matrix_near(const Matrix2d& a, const Matrix2d& b, double tol) {
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), tol) << a << "\nvs\n" << b;
}

GaussianState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> sq(0.5, 4.0), ang(0.0, 2 * M_PI), rad(0.0, 2.0), lam(0.5, 1.0);
  const double r = rad(rng), phi = ang(rng);
  const GaussianState pure = squeezed_state(sq(rng), ang(rng), Vector2d(r * std::cos(phi), r * std::sin(phi)));
  return apply_attenuation(pure, lam(rng));
}

}  // namespace

TEST(SqueezedState, IdentityCase) {
  for (double th : {0.0, 0.7, 2.0}) {
    const GaussianState g = squeezed_state(1.0, th);
    expect_matrix_near(g.cov, Matrix2d::Identity(), 1e-15);
    EXPECT_TRUE(g.is_centered());
  }
}

TEST(SqueezedState, AxisAlignedAndQuarterTurn) {
  expect_matrix_near(squeezed_state(4.0).cov, Vector2d(4.0, 0.25).asDiagonal().toDenseMatrix(), 1e-15);
  expect_matrix_near(squeezed_state(3.0, M_PI / 2).cov, Vector2d(1.0 / 3, 3.0).asDiagonal().toDenseMatrix(), 1e-14);
}

TEST(SqueezedState, PureAndDisplaced) {
  const GaussianState g = squeezed_state(7.0, 0.3, Vector2d(1.0, -2.0));
  EXPECT_TRUE(g.is_pure());
  EXPECT_TRUE(g.is_physical());
  EXPECT_EQ(g.disp, Vector2d(1.0, -2.0));
}

TEST(SqueezedState, RejectsNonPositiveSqueezing) {
  EXPECT_THROW(squeezed_state(0.0), domain_error);
  EXPECT_THROW(squeezed_state(-1.0), domain_error);
}

TEST(Symplectic, FormIdentities) {
  const Matrix2d s = SymplecticData::sigma();
  const Matrix2d z = SymplecticData::momentum_flip();
  expect_matrix_near(s * s, -Matrix2d::Identity(), 0);
  expect_matrix_near(z.transpose() * s * z, -s, 0);
}

TEST(Attenuation, Examples) {
  const GaussianState g = squeezed_state(4.0, 0.0, Vector2d(1.0, 1.0));
  const GaussianState same = apply_attenuation(g, 1.0);
  expect_matrix_near(same.cov, g.cov, 0);
  EXPECT_EQ(same.disp, g.disp);
  const GaussianState vac = apply_attenuation(g, 0.0);
  expect_matrix_near(vac.cov, Matrix2d::Identity(), 0);
  EXPECT_TRUE(vac.is_centered());
  expect_matrix_near(apply_attenuation(squeezed_state(4.0), 0.5).cov,
                     Vector2d(2.5, 0.625).asDiagonal().toDenseMatrix(), 1e-15);
  EXPECT_THROW(apply_attenuation(g, 1.5), domain_error);
  EXPECT_THROW(apply_attenuation(g, -0.1), domain_error);
}

TEST(AdditiveNoise, Examples) {
  const GaussianState g = squeezed_state(2.0, 0.4);
  expect_matrix_near(apply_additive_noise(g, 0.0).cov, g.cov, 0);
  expect_matrix_near(apply_additive_noise(GaussianState::vacuum(), 2.0).cov, 3.0 * Matrix2d::Identity(), 0);
  EXPECT_GT(apply_additive_noise(g, 0.1).cov.determinant(), g.cov.determinant());
  EXPECT_THROW(apply_additive_noise(g, -1e-3), domain_error);
}

TEST(Heterodyne, Examples) {
  expect_matrix_near(heterodyne_output(GaussianState::vacuum()).cov, 3.0 * Matrix2d::Identity(), 0);
  expect_matrix_near(heterodyne_output(squeezed_state(4.0)).cov, Vector2d(6.0, 2.25).asDiagonal().toDenseMatrix(),
                     1e-15);
}

TEST(Overlap, Examples) {
  EXPECT_NEAR(overlap(GaussianState::vacuum(), GaussianState::vacuum()), 1.0, 1e-15);
  const GaussianState rs = squeezed_state(4.0);
  EXPECT_NEAR(overlap(rs, heterodyne_output(rs)), 0.4, 1e-15);
  GaussianState shifted;
  shifted.disp = Vector2d(2.0, 0.0);
  EXPECT_NEAR(overlap(GaussianState::vacuum(), shifted), std::exp(-2.0), 1e-15);
}

TEST(Overlap, DisplacedVacuumAgreesWithFockOracle) {
  GaussianState shifted;
  shifted.disp = Vector2d(2.0, 0.0);
  const FockMatrix a = fock_matrix_oracle(GaussianState::vacuum(), 40);
  const FockMatrix b = fock_matrix_oracle(shifted, 40);
  EXPECT_NEAR((a.entries * b.entries).trace().real(), 0.1353352832366127, 1e-10);
}

TEST(Overlap, RejectsUnphysicalStates) {
  GaussianState bad;
  bad.cov = 0.5 * Matrix2d::Identity();
  EXPECT_THROW(overlap(bad, GaussianState::vacuum()), domain_error);
}

TEST(PhaseSpaceProperties, ChannelsPreservePhysicality) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const GaussianState g = random_state(rng);
    EXPECT_TRUE(apply_attenuation(g, u(rng)).is_physical());
    EXPECT_TRUE(apply_additive_noise(g, 3.0 * u(rng)).is_physical());
    EXPECT_TRUE(heterodyne_output(g).is_physical());
  }
}

TEST(PhaseSpaceProperties, OverlapSymmetricBoundedAndRotationInvariant) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ang(0.0, 2 * M_PI);
  for (int i = 0; i < 500; ++i) {
    const GaussianState a = random_state(rng), b = random_state(rng);
    const double o = overlap(a, b);
    EXPECT_NEAR(o, overlap(b, a), 1e-15);
    EXPECT_GT(o, 0.0);
    EXPECT_LE(o, 1.0);
    const double th = ang(rng);
    EXPECT_NEAR(overlap(rotate(a, th), rotate(b, th)), o, 1e-12);
    EXPECT_NEAR(overlap(a, a), 1.0 / std::sqrt(a.cov.determinant()), 1e-12);
  }
  const GaussianState pure = squeezed_state(3.0, 1.0, Vector2d(1.0, 0.5));
  EXPECT_NEAR(overlap(pure, pure), 1.0, 1e-12);
  EXPECT_LT(overlap(apply_attenuation(pure, 0.5), apply_attenuation(pure, 0.5)), 1.0 - 1e-3);
}

TEST(PhaseSpaceProperties, ChannelsCommuteWithRotations) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0.0, 2 * M_PI), u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const GaussianState g = random_state(rng);
    const double th = ang(rng), lam = u(rng), eta = 2.0 * u(rng);
    const GaussianState x = rotate(apply_attenuation(g, lam), th), y = apply_attenuation(rotate(g, th), lam);
    expect_matrix_near(x.cov, y.cov, 1e-12);
    EXPECT_LT((x.disp - y.disp).norm(), 1e-12);
    expect_matrix_near(rotate(apply_additive_noise(g, eta), th).cov, apply_additive_noise(rotate(g, th), eta).cov,
                       1e-12);
  }
}

TEST(PhaseSpaceProperties, OverlapAgreesWithFockTrace) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 30; ++i) {
    const GaussianState a = random_state(rng), b = random_state(rng);
    const FockMatrix fa = fock_matrix(a, 40), fb = fock_matrix(b, 40);
    EXPECT_NEAR(overlap(a, b), (fa.entries * fb.entries).trace().real(), 1e-6);
  }
}

TEST(WeylConvention, SingleConversionOwnsTheSign) {
  // W_xi = exp(i xi . sigma R) shifts <R> by -xi under rho -> W rho W^dag.
  const Vector2d xi(0.3, -1.2);
  EXPECT_EQ(weyl_to_first_moments(xi), -xi);
}
