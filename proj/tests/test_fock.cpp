#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sqbench/analytic.hpp"
#include "sqbench/fock.hpp"

using namespace sqbench;
using Eigen::Vector2d;

namespace {

double max_abs_diff(const FockMatrix& a, const FockMatrix& b) { return (a.entries - b.entries).cwiseAbs().maxCoeff(); }

GaussianState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> sq(0.5, 4.0), ang(0.0, 2 * M_PI), rad(0.0, 2.0), lam(0.5, 1.0);
  const double r = rad(rng), phi = ang(rng);
  return apply_attenuation(squeezed_state(sq(rng), ang(rng), Vector2d(r * std::cos(phi), r * std::sin(phi))), lam(rng));
}

GaussianState centered_noisy_squeezed(double s, double eta, double theta = 0.0) {
  GaussianState g = squeezed_state(s, theta);
  g.cov += 0.5 * eta * Eigen::Matrix2d::Identity();
  return g;
}

}  // namespace

TEST(FockMatrix, Vacuum) {
  for (const FockMatrix& f : {fock_matrix(GaussianState::vacuum(), 3), fock_matrix_oracle(GaussianState::vacuum(), 3)}) {
    ASSERT_EQ(f.dim(), 4);
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
    expected(0, 0) = 1.0;
    EXPECT_LT((f.entries - expected).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(FockMatrix, SqueezedVacuumStructure) {
  const FockMatrix f = fock_matrix(squeezed_state(4.0), 20);
  EXPECT_NEAR(f(0, 0).real(), 0.8, 1e-15);
  for (int k = 1; k <= 20; k += 2)
    for (int l = 0; l <= 20; ++l) EXPECT_LE(std::abs(f(k, l)), 1e-15);
}

TEST(FockMatrix, MixedDisplacedAgreesWithOracle) {
  const GaussianState g = apply_attenuation(squeezed_state(2.0, 0.0, Vector2d(1.0, 0.5)), 0.7);
  EXPECT_LE(max_abs_diff(fock_matrix(g, 30), fock_matrix_oracle(g, 30)), 1e-8);
}

TEST(FockMatrix, RandomStatesAgreeWithOracle) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 25; ++i) {
    const GaussianState g = random_state(rng);
    EXPECT_LE(max_abs_diff(fock_matrix(g, 30), fock_matrix_oracle(g, 30)), 1e-8) << "state " << i;
  }
}

TEST(FockMatrix, AccurateAtLargeCutoffAndDisplacement) {
  for (double s : {0.1, 10.0}) {
    const GaussianState g = squeezed_state(s, 0.8, Vector2d(6.0 * std::cos(1.1), 6.0 * std::sin(1.1)));
    EXPECT_LE(max_abs_diff(fock_matrix(g, 60), fock_matrix_oracle(g, 60)), 1e-10);
  }
}

TEST(FockMatrix, ValidMatrixInvariants) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    const FockMatrix f = fock_matrix(random_state(rng), 25);
    EXPECT_LE((f.entries - f.entries.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(f.hermiticity_correction, 1e-12);
    for (int k = 0; k < f.dim(); ++k) {
      EXPECT_EQ(f(k, k).imag(), 0.0);
      EXPECT_GE(f(k, k).real(), 0.0);
      EXPECT_LE(f(k, k).real(), 1.0);
    }
    EXPECT_LE(f.trace(), 1.0 + 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f.entries);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
  }
}

TEST(FockMatrix, RejectsBadInput) {
  EXPECT_THROW(fock_matrix(GaussianState::vacuum(), -1), domain_error);
  GaussianState bad;
  bad.cov = 0.5 * Eigen::Matrix2d::Identity();
  EXPECT_THROW(fock_matrix(bad, 3), domain_error);
  EXPECT_THROW(fock_matrix_oracle(bad, 3), domain_error);
}

TEST(FockMatrix, AccuracyErrorCarriesPosition) {
  const accuracy_error e(3, 7, "fock_matrix: overflow");
  EXPECT_EQ(e.row(), 3);
  EXPECT_EQ(e.col(), 7);
  EXPECT_NE(std::string(e.what()).find("(3,7)"), std::string::npos);
}

TEST(FockOracle, CoherentStatePoisson) {
  GaussianState g;
  g.disp = Vector2d(1.2, -0.7);
  const double w = 0.5 * g.disp.squaredNorm();
  const FockMatrix f = fock_matrix_oracle(g, 20);
  double p = std::exp(-w);
  for (int n = 0; n <= 20; ++n) {
    EXPECT_NEAR(f(n, n).real(), p, 1e-12);
    p *= w / (n + 1);
  }
}

TEST(FockOracle, SqueezedVacuumMatchesAmplitudes) {
  for (double s : {0.3, 2.0, 6.0}) {
    const FockMatrix f = fock_matrix_oracle(squeezed_state(s), 30);
    const Eigen::VectorXd amp = squeezed_vacuum_amplitudes(s, 30);
    for (int n = 0; n <= 30; ++n) EXPECT_NEAR(f(n, n).real(), amp(n) * amp(n), 1e-12);
  }
}

TEST(SqueezedAmplitudes, Examples) {
  const Eigen::VectorXd vac = squeezed_vacuum_amplitudes(1.0, 6);
  EXPECT_EQ(vac(0), 1.0);
  EXPECT_EQ(vac.tail(6).cwiseAbs().maxCoeff(), 0.0);
  const Eigen::VectorXd a4 = squeezed_vacuum_amplitudes(4.0, 8);
  EXPECT_NEAR(a4(0) * a4(0), 0.8, 1e-15);
  for (int n = 1; n <= 8; n += 2) EXPECT_EQ(a4(n), 0.0);
  for (double s = 1.0; s <= 10.0; s += 1.0) EXPECT_GE(squeezed_vacuum_amplitudes(s, 60).squaredNorm(), 0.999);
  EXPECT_THROW(squeezed_vacuum_amplitudes(0.0, 3), domain_error);
}

TEST(SqueezedAmplitudes, ClosedFormEntries) {
  const double s = 3.0;
  const Eigen::VectorXd a = squeezed_vacuum_amplitudes(s, 20);
  for (int n = 0; n <= 10; ++n) {
    const double closed = std::sqrt(2.0 * std::sqrt(s) / (1.0 + s)) *
                          std::exp(0.5 * std::lgamma(2.0 * n + 1) - std::lgamma(n + 1.0)) *
                          std::pow((s - 1.0) / (2.0 * s + 2.0), n);
    EXPECT_NEAR(a(2 * n), closed, 1e-14);
  }
}

TEST(RotationAverage, KeepsDiagonalAndTrace) {
  const FockMatrix f = fock_matrix(squeezed_state(2.0, 0.3, Vector2d(0.4, 0.9)), 12);
  const FockMatrix avg = rotation_average(f);
  EXPECT_NEAR(avg.trace(), f.trace(), 1e-15);
  for (int k = 0; k < f.dim(); ++k)
    for (int l = 0; l < f.dim(); ++l) EXPECT_EQ(avg(k, l), k == l ? f(k, l) : cplx(0.0));
  const FockMatrix twice = rotation_average(avg);
  EXPECT_EQ((twice.entries - avg.entries).cwiseAbs().maxCoeff(), 0.0);
}

TEST(RotationAverage, VacuumDominatesForCenteredStates) {
  for (double s = 1.0; s <= 10.0; s += 0.5)
    for (double eta = 0.0; eta <= 2.0; eta += 0.25) {
      const FockMatrix avg = rotation_average(fock_matrix(centered_noisy_squeezed(s, eta), 40));
      Eigen::Index arg;
      avg.entries.diagonal().real().maxCoeff(&arg);
      EXPECT_EQ(arg, 0) << "s " << s << " eta " << eta;
    }
}

TEST(FockProperties, RotationActsAsPhaseTwist) {
  std::mt19937_64 rng(14);
  for (double th : {0.4, 1.9, -2.5}) {
    const GaussianState g = random_state(rng);
    EXPECT_LE(max_abs_diff(fock_matrix(sqbench::rotate(g, th), 20), sqbench::rotate(fock_matrix(g, 20), th)), 1e-12);
  }
}

TEST(FockProperties, TraceNonDecreasingInCutoff) {
  const GaussianState g = squeezed_state(3.0, 0.2, Vector2d(1.5, 0.0));
  double prev = 0.0;
  for (int c = 0; c <= 60; ++c) {
    const double t = fock_matrix(g, c).trace();
    EXPECT_GE(t, prev);
    prev = t;
  }
  EXPECT_NEAR(prev, 1.0, 1e-8);
}

TEST(FockProperties, MixedBenchmarkFromVacuumEntry) {
  for (double s : {1.0, 2.5, 7.0})
    for (double eta : {0.0, 0.3, 1.7})
      for (int c : {0, 5, 30})
        EXPECT_NEAR(0.5 * rotation_average(fock_matrix(centered_noisy_squeezed(s, eta), c))(0, 0).real(),
                    mixed_benchmark(s, eta).value, 1e-9);
}

TEST(CovariantChannel, VacuumTauGivesPureBenchmark) {
  FockMatrix tau;
  tau.entries = Eigen::MatrixXcd::Zero(11, 11);
  tau.entries(0, 0) = 1.0;
  for (double s : {1.0, 4.0, 9.0})
    EXPECT_NEAR(covariant_channel_overlap(tau, squeezed_state(s)), pure_benchmark(s).value, 1e-14);
}

TEST(CovariantChannel, MaximallyMixedTauOnVacuum) {
  FockMatrix tau;
  tau.entries = Eigen::MatrixXcd::Zero(6, 6);
  for (int k = 0; k < 4; ++k) tau.entries(k, k) = 0.25;
  EXPECT_NEAR(covariant_channel_overlap(tau, GaussianState::vacuum()), 0.5 * 0.25, 1e-15);
}

TEST(CovariantChannel, SupremumOverProjectorsIsVacuumEntry) {
  const GaussianState rho = centered_noisy_squeezed(3.0, 0.8, 0.6);
  const int c = 30;
  const FockMatrix avg = rotation_average(fock_matrix(rho, c));
  double best = 0.0;
  for (int n = 0; n <= c; ++n) {
    FockMatrix tau;
    tau.entries = Eigen::MatrixXcd::Zero(c + 1, c + 1);
    tau.entries(n, n) = 1.0;
    best = std::max(best, covariant_channel_overlap(tau, rho));
  }
  EXPECT_NEAR(best, 0.5 * avg.entries.diagonal().real().maxCoeff(), 1e-14);
  EXPECT_NEAR(best, mixed_benchmark(3.0, 0.8).value, 1e-9);
}

TEST(CovariantChannel, RejectsDisplacedInputAndOverfullTau) {
  FockMatrix tau;
  tau.entries = Eigen::MatrixXcd::Identity(3, 3);
  EXPECT_THROW(covariant_channel_overlap(tau, GaussianState::vacuum()), domain_error);
  tau.entries = Eigen::MatrixXcd::Zero(3, 3);
  tau.entries(0, 0) = 1.0;
  GaussianState shifted;
  shifted.disp = Vector2d(0.1, 0.0);
  EXPECT_THROW(covariant_channel_overlap(tau, shifted), domain_error);
}
