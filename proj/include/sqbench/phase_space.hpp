// Copyright 2026 The sqbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Single-mode Gaussian phase-space calculus.
//
// Conventions: R = (X, P) with [X, P] = i and X = (a + a^dag)/sqrt(2).  The
// covariance matrix is gamma_jk = <{R_j, R_k}> - 2 <R_j><R_k>, so the vacuum
// has gamma = 1.  GaussianState::disp holds the first moments (<X>, <P>).

#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "sqbench/errors.hpp"

namespace sqbench {

inline constexpr double kPhysicalityTol = 1e-9;
inline constexpr double kPurityTol = 1e-10;

struct GaussianState {
  Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();
  Eigen::Vector2d disp = Eigen::Vector2d::Zero();

  static GaussianState vacuum() { return {}; }

  bool is_symmetric(double tol = 1e-12) const {
    return std::abs(cov(0, 1) - cov(1, 0)) <= tol * (1.0 + cov.cwiseAbs().maxCoeff());
  }

  // cov + i sigma >= 0  <=>  cov > 0 and det(cov) >= 1 for a single mode.
  bool is_physical(double tol = kPhysicalityTol) const {
    return is_symmetric() && cov(0, 0) > 0.0 && cov(1, 1) > 0.0 && cov.determinant() >= 1.0 - tol;
  }

  bool is_pure(double tol = kPurityTol) const {
    return std::abs(cov.determinant() - 1.0) <= tol;
  }

  bool is_centered(double tol = 1e-12) const { return disp.cwiseAbs().maxCoeff() <= tol; }
};

struct SymplecticData {
  /// Antisymmetric form with [R_j, R_k] = i sigma_jk.
  static Eigen::Matrix2d sigma() {
    Eigen::Matrix2d s;
    s << 0.0, 1.0, -1.0, 0.0;
    return s;
  }
  /// Time reversal on phase space: P -> -P.
  static Eigen::Matrix2d momentum_flip() { return Eigen::Vector2d(1.0, -1.0).asDiagonal(); }
};

/// Phase-space rotation induced by U = exp(i theta n): <a> -> e^{i theta} <a>.
inline Eigen::Matrix2d rotation_matrix(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

/// First moments of W_xi rho W_xi^dag relative to rho, for the Weyl operator
/// W_xi = exp(i xi . sigma R).  This is the only place where Weyl labels and
/// first moments are related; everything else in the library works with
/// first moments directly.
inline Eigen::Vector2d weyl_to_first_moments(const Eigen::Vector2d& xi) { return -xi; }

inline void require_physical(const GaussianState& g, const char* who) {
  if (!g.is_physical()) {
    throw domain_error(std::string(who) + ": unphysical Gaussian state (det(cov) < 1 or cov not positive)");
  }
}

/// Pure squeezed state with covariance R diag(s, 1/s) R^T, R = rotation_matrix(theta).
inline GaussianState squeezed_state(double s, double theta = 0.0,
                                    const Eigen::Vector2d& first_moments = Eigen::Vector2d::Zero()) {
  if (!(s > 0.0) || !std::isfinite(s)) throw domain_error("squeezed_state: squeezing must be positive");
  const Eigen::Matrix2d r = rotation_matrix(theta);
  GaussianState g;
  g.cov = r * Eigen::Vector2d(s, 1.0 / s).asDiagonal() * r.transpose();
  g.cov(1, 0) = g.cov(0, 1);
  g.disp = first_moments;
  return g;
}

inline GaussianState rotate(const GaussianState& g, double theta) {
  const Eigen::Matrix2d r = rotation_matrix(theta);
  GaussianState out;
  out.cov = r * g.cov * r.transpose();
  out.cov(1, 0) = out.cov(0, 1);
  out.disp = r * g.disp;
  return out;
}

/// Pure-loss channel with intensity transmissivity lambda.
inline GaussianState apply_attenuation(const GaussianState& g, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw domain_error("apply_attenuation: transmissivity must lie in [0,1]");
  GaussianState out;
  out.cov = lambda * g.cov + (1.0 - lambda) * Eigen::Matrix2d::Identity();
  out.disp = std::sqrt(lambda) * g.disp;
  return out;
}

/// Classical additive Gaussian noise of variance eta.
inline GaussianState apply_additive_noise(const GaussianState& g, double eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw domain_error("apply_additive_noise: noise must be non-negative");
  GaussianState out = g;
  out.cov += eta * Eigen::Matrix2d::Identity();
  return out;
}

/// Heterodyne detection followed by coherent-state preparation.
inline GaussianState heterodyne_output(const GaussianState& g) { return apply_additive_noise(g, 2.0); }

/// Tr[rho1 rho2] = 2 exp(-d^T (g1+g2)^{-1} d) / sqrt(det(g1+g2)), d = d1 - d2.
inline double overlap(const GaussianState& g1, const GaussianState& g2) {
  require_physical(g1, "overlap");
  require_physical(g2, "overlap");
  const Eigen::Matrix2d sum = g1.cov + g2.cov;
  const double det = sum(0, 0) * sum(1, 1) - sum(0, 1) * sum(1, 0);
  if (!(det > 0.0)) throw integrity_error("overlap: singular covariance sum");
  Eigen::Matrix2d inv;
  inv << sum(1, 1), -sum(0, 1), -sum(1, 0), sum(0, 0);
  inv /= det;
  const Eigen::Vector2d d = g1.disp - g2.disp;
  return 2.0 * std::exp(-d.dot(inv * d)) / std::sqrt(det);
}

}  // namespace sqbench
