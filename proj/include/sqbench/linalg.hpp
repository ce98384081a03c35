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

#pragma once

#include <algorithm>
#include <complex>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "sqbench/errors.hpp"

namespace sqbench::linalg {

inline Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

inline double min_eigenvalue(const Eigen::MatrixXcd& h) {
  if (h.rows() == 0) return 0.0;
  if (h.rows() == 1) return h(0, 0).real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline Eigen::MatrixXcd clip_psd(const Eigen::MatrixXcd& h) {
  if (h.rows() == 0) return h;
  if (h.rows() == 1) return Eigen::MatrixXcd::Constant(1, 1, std::max(0.0, h(0, 0).real()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian_part(h));
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

/// Partial transpose on the second factor of a (da*db)-dimensional operator,
/// index (k, l) -> k*db + l.
inline Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& m, int da, int db) {
  if (m.rows() != da * db || m.cols() != da * db) throw domain_error("partial_transpose: dimension mismatch");
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (int k = 0; k < da; ++k)
    for (int l = 0; l < db; ++l)
      for (int k2 = 0; k2 < da; ++k2)
        for (int l2 = 0; l2 < db; ++l2) out(k * db + l, k2 * db + l2) = m(k * db + l2, k2 * db + l);
  return out;
}

/// Trace over the second factor.
inline Eigen::MatrixXcd partial_trace_b(const Eigen::MatrixXcd& m, int da, int db) {
  if (m.rows() != da * db || m.cols() != da * db) throw domain_error("partial_trace_b: dimension mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(da, da);
  for (int k = 0; k < da; ++k)
    for (int k2 = 0; k2 < da; ++k2)
      for (int l = 0; l < db; ++l) out(k, k2) += m(k * db + l, k2 * db + l);
  return out;
}

}  // namespace sqbench::linalg
