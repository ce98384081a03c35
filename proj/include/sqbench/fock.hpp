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

// Number-basis representation of single-mode Gaussian states.
//
// fock_matrix() uses the generating function of the normally ordered
// coherent-state matrix elements,
//
//   sum_{k,l} <k|rho|l> u^k v^l / sqrt(k! l!) = T exp(z^T A z / 2 + b^T z),   z = (u, v),
//
// which is obtained from the Husimi function <a|rho|a> e^{|a|^2} by continuing
// (conj(a), a) -> (u, v).  Taylor coefficients of a Gaussian are two-variable
// Hermite polynomials; the recurrences below are the factorial-normalised
// form of the Hermite three-term recurrence, so no factorial is ever formed.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "sqbench/errors.hpp"
#include "sqbench/phase_space.hpp"

namespace sqbench {

using cplx = std::complex<double>;

struct FockMatrix {
  /// entries(k, l) = <k|rho|l>, k, l = 0..cutoff.
  Eigen::MatrixXcd entries;
  /// Largest |F - F^dag| / 2 removed by the final Hermitian projection.
  double hermiticity_correction = 0.0;

  int cutoff() const { return static_cast<int>(entries.rows()) - 1; }
  Eigen::Index dim() const { return entries.rows(); }
  cplx operator()(int k, int l) const { return entries(k, l); }
  double trace() const { return entries.diagonal().real().sum(); }
};

namespace detail {

inline void hermitize(FockMatrix& f) {
  const Eigen::MatrixXcd adj = f.entries.adjoint();
  f.hermiticity_correction = 0.5 * (f.entries - adj).cwiseAbs().maxCoeff();
  f.entries = 0.5 * (f.entries + adj);
}

}  // namespace detail

inline FockMatrix fock_matrix(const GaussianState& g, int cutoff) {
  if (cutoff < 0) throw domain_error("fock_matrix: cutoff must be non-negative");
  require_physical(g, "fock_matrix");

  const Eigen::Matrix2d q = g.cov + Eigen::Matrix2d::Identity();
  const double det_q = q.determinant();
  Eigen::Matrix2d m;
  m << q(1, 1), -q(0, 1), -q(1, 0), q(0, 0);
  m /= det_q;

  // (<X>, <P>) of the coherent state |a> is sqrt(2) (Re a, Im a) = L z with
  // z = (conj(a), a).
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd l;
  l << cplx(h, 0), cplx(h, 0), cplx(0, h), cplx(0, -h);
  Eigen::Matrix2cd swap;
  swap << 0.0, 1.0, 1.0, 0.0;
  const Eigen::Matrix2cd a = -2.0 * l.transpose() * m.cast<cplx>() * l + swap;
  const Eigen::Vector2cd b = 2.0 * l.transpose() * (m * g.disp).cast<cplx>();
  const double t = 2.0 / std::sqrt(det_q) * std::exp(-g.disp.dot(m * g.disp));

  const int n = cutoff + 1;
  FockMatrix f;
  f.entries = Eigen::MatrixXcd::Zero(n, n);
  auto& r = f.entries;
  r(0, 0) = t;
  for (int k = 0; k < n; ++k) {
    for (int c = 0; c < n; ++c) {
      if (k == 0 && c == 0) continue;
      cplx v;
      if (k > 0) {
        const int kk = k - 1;
        v = b(0) * r(kk, c);
        if (kk > 0) v += a(0, 0) * std::sqrt(double(kk)) * r(kk - 1, c);
        if (c > 0) v += a(0, 1) * std::sqrt(double(c)) * r(kk, c - 1);
        v /= std::sqrt(double(kk + 1));
      } else {
        const int cc = c - 1;
        v = b(1) * r(k, cc);
        if (cc > 0) v += a(1, 1) * std::sqrt(double(cc)) * r(k, cc - 1);
        v /= std::sqrt(double(cc + 1));
      }
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw accuracy_error(k, c, "fock_matrix: non-finite Hermite recurrence value");
      }
      r(k, c) = v;
    }
  }
  detail::hermitize(f);
  return f;
}

/// exp(-i H) for Hermitian H, exact up to the eigensolver.
inline Eigen::MatrixXcd unitary_exp(const Eigen::MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian);
  const Eigen::VectorXcd phases =
      es.eigenvalues().unaryExpr([](double x) { return std::exp(cplx(0.0, -x)); });
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Independent reference for fock_matrix(): Williamson decomposition into a
/// thermal state, a squeezer and a displacement, with the unitaries built as
/// exponentials of truncated ladder operators on an enlarged space.
inline FockMatrix fock_matrix_oracle(const GaussianState& g, int cutoff) {
  if (cutoff < 0) throw domain_error("fock_matrix_oracle: cutoff must be non-negative");
  require_physical(g, "fock_matrix_oracle");
  const int big = 3 * (cutoff + 1) + 60;

  const double nu = std::sqrt(std::max(1.0, g.cov.determinant()));
  const double nbar = 0.5 * (nu - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g.cov / nu);
  const double stretch = es.eigenvalues()(1);
  const Eigen::Vector2d axis = es.eigenvectors().col(1);
  const double phi = std::atan2(axis(1), axis(0));
  const double r = 0.5 * std::log(stretch);
  // S(z) = exp((conj(z) a^2 - z a^dag^2) / 2) squeezes the X quadrature for
  // real z > 0; the sign and phase below stretch the axis at angle phi.
  const cplx z = -r * std::exp(cplx(0.0, 2.0 * phi));
  const cplx beta = cplx(g.disp(0), g.disp(1)) / std::sqrt(2.0);

  Eigen::MatrixXcd ann = Eigen::MatrixXcd::Zero(big, big);
  for (int i = 1; i < big; ++i) ann(i - 1, i) = std::sqrt(double(i));
  const Eigen::MatrixXcd cre = ann.adjoint();

  // exp(K) with K anti-Hermitian equals exp(-i H) with H = i K.
  const cplx I(0.0, 1.0);
  const Eigen::MatrixXcd k_sq = 0.5 * (std::conj(z) * ann * ann - z * cre * cre);
  const Eigen::MatrixXcd k_disp = beta * cre - std::conj(beta) * ann;
  Eigen::MatrixXcd h_sq = I * k_sq;
  Eigen::MatrixXcd h_disp = I * k_disp;
  h_sq = 0.5 * (h_sq + h_sq.adjoint()).eval();
  h_disp = 0.5 * (h_disp + h_disp.adjoint()).eval();
  const Eigen::MatrixXcd u = unitary_exp(h_disp) * unitary_exp(h_sq);

  Eigen::VectorXd thermal(big);
  for (int i = 0; i < big; ++i) thermal(i) = std::pow(nbar, i) / std::pow(nbar + 1.0, i + 1);

  const Eigen::MatrixXcd top = u.topRows(cutoff + 1);
  FockMatrix f;
  f.entries = top * thermal.asDiagonal() * top.adjoint();
  detail::hermitize(f);
  return f;
}

/// Amplitudes <n|psi> of the centred squeezed vacuum with covariance diag(s, 1/s).
inline Eigen::VectorXd squeezed_vacuum_amplitudes(double s, int nmax) {
  if (!(s > 0.0)) throw domain_error("squeezed_vacuum_amplitudes: squeezing must be positive");
  if (nmax < 0) throw domain_error("squeezed_vacuum_amplitudes: nmax must be non-negative");
  Eigen::VectorXd amp = Eigen::VectorXd::Zero(nmax + 1);
  const double ratio = (s - 1.0) / (2.0 * s + 2.0);
  double a = std::sqrt(2.0 * std::sqrt(s) / (1.0 + s));
  for (int n = 0; 2 * n <= nmax; ++n) {
    amp(2 * n) = a;
    // sqrt((2n+2)!)/(n+1)! over sqrt((2n)!)/n!
    a *= std::sqrt((2.0 * n + 1.0) * (2.0 * n + 2.0)) / (n + 1.0) * ratio;
  }
  return amp;
}

/// Twirl over U_theta = exp(i theta n): keeps only the diagonal.
inline FockMatrix rotation_average(const FockMatrix& f) {
  FockMatrix out;
  out.entries = f.entries.diagonal().asDiagonal();
  return out;
}

/// U_theta rho U_theta^dag in the number basis.
inline FockMatrix rotate(const FockMatrix& f, double theta) {
  FockMatrix out = f;
  for (Eigen::Index k = 0; k < f.dim(); ++k)
    for (Eigen::Index l = 0; l < f.dim(); ++l)
      out.entries(k, l) *= std::exp(cplx(0.0, theta * double(k - l)));
  return out;
}

/// Fidelity reached on a centred Gaussian input by the time-reversible,
/// phase-space covariant channel T*(W_xi) = Tr[tau W_{sqrt2 xi}] W_xi.
inline double covariant_channel_overlap(const FockMatrix& tau, const GaussianState& g) {
  if (!g.is_centered()) throw domain_error("covariant_channel_overlap: input state must be centred");
  if (tau.trace() > 1.0 + 1e-9) throw domain_error("covariant_channel_overlap: tau has trace above one");
  const FockMatrix rho = fock_matrix(g, tau.cutoff());
  return 0.5 * (tau.entries * rho.entries).trace().real();
}

}  // namespace sqbench
