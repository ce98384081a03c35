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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sqbench/ensemble.hpp"
#include "sqbench/errors.hpp"
#include "sqbench/sdp.hpp"

namespace sqbench {

struct BenchmarkTimings {
  double eta_ms = 0.0;
  double solve_ms = 0.0;
  double total_ms = 0.0;
};

/// F_infinite = F_finite + eps_error, with F_finite the certified SDP bound.
struct BenchmarkReport {
  EnsembleSpec spec;
  double tol = 0.0;
  double f_finite = 0.0;
  double eps_error = 0.0;
  double f_infinite = 0.0;
  double certified = 0.0;
  double primal = 0.0;
  double gap = 0.0;
  double trace_captured = 0.0;
  int samples = 0;
  int iterations = 0;
  SdpStatus status = SdpStatus::slow_progress;
  /// f_infinite(2N) - f_infinite(N); an integration diagnostic, not a bound.
  std::optional<double> qmc_doubling_delta;
  std::vector<std::string> warnings;
  BenchmarkTimings timings;
};

struct PipelineOptions {
  SdpOptions sdp = {};
  bool qmc_doubling = false;
};

/// Solve the SDP for a prebuilt (or loaded) eta.
inline BenchmarkReport benchmark_from_eta(const EnsembleSpec& spec, const EtaBlocks& eta,
                                          const PipelineOptions& opt = {}) {
  if (eta.cutoff != spec.cutoff) throw integrity_error("benchmark: eta cutoff does not match the spec");
  BenchmarkReport r;
  r.spec = spec;
  r.tol = opt.sdp.tol;
  r.samples = int(sample_displacements(spec).size());
  r.trace_captured = eta.trace_captured;
  r.eps_error = truncation_error(eta);

  const BlockSdp problem = assemble_problem(eta);
  const SdpSolution sol = solve(problem, opt.sdp);
  r.certified = certified_upper_bound(problem, sol);
  r.primal = sol.primal_value;
  r.gap = sol.gap;
  r.iterations = sol.iterations;
  r.status = sol.status;
  r.timings.solve_ms = sol.solve_ms;
  r.f_finite = r.certified;
  r.f_infinite = r.f_finite + r.eps_error;

  if (sol.status != SdpStatus::optimal) r.warnings.push_back("solver status " + std::string(to_string(sol.status)));
  if (sol.repair_warning) r.warnings.push_back("dual repair inflated the bound by more than 0.01");
  if (eta.hermiticity_residual > 1e-10) r.warnings.push_back("eta hermiticity residual above 1e-10");
  return r;
}

inline BenchmarkReport benchmark_pipeline(const EnsembleSpec& spec, const PipelineOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const EtaBlocks eta = build_eta(spec);
  const auto t1 = std::chrono::steady_clock::now();
  BenchmarkReport r = benchmark_from_eta(spec, eta, opt);
  r.timings.eta_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (opt.qmc_doubling && std::holds_alternative<GaussianIsotropic>(spec.prior)) {
    EnsembleSpec twice = spec;
    twice.samples = 2 * spec.samples;
    PipelineOptions inner = opt;
    inner.qmc_doubling = false;
    r.qmc_doubling_delta = benchmark_pipeline(twice, inner).f_infinite - r.f_infinite;
  }
  r.timings.total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline BenchmarkReport benchmark_pipeline(const EnsembleSpec& spec, double tol = 1e-7) {
  PipelineOptions opt;
  opt.sdp.tol = tol;
  return benchmark_pipeline(spec, opt);
}

// ---------------------------------------------------------------------------

/// Largest eigenvalue magnitude of a Hermitian matrix.
inline double operator_norm(const Eigen::MatrixXcd& op) {
  if (op.rows() != op.cols()) throw domain_error("operator_norm: matrix is not square");
  if (op.size() == 0) return 0.0;
  if ((op - op.adjoint()).cwiseAbs().maxCoeff() > 1e-9) throw domain_error("operator_norm: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(linalg::hermitian_part(op), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline Eigen::MatrixXcd kronecker(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Omega = sum_x M_x (x) sigma_x for a random POVM {M_x} on C^{c+1} and random
/// density matrices sigma_x; Tr_B Omega = 1.
inline Eigen::MatrixXcd random_separable_choi(int cutoff, int terms, std::uint64_t seed) {
  if (cutoff < 0) throw domain_error("random_separable_choi: cutoff must be non-negative");
  if (terms < 1) throw domain_error("random_separable_choi: need at least one term");
  const int d = cutoff + 1;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  auto ginibre = [&] {
    Eigen::MatrixXcd g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = cplx(n01(rng), n01(rng));
    return Eigen::MatrixXcd(g * g.adjoint());
  };

  std::vector<Eigen::MatrixXcd> effects;
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(d, d);
  for (int x = 0; x < terms; ++x) {
    effects.push_back(ginibre());
    total += effects.back();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(linalg::hermitian_part(total));
  const Eigen::MatrixXcd isqrt = es.operatorInverseSqrt();

  Eigen::MatrixXcd omega = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (const auto& p : effects) {
    const Eigen::MatrixXcd m = linalg::hermitian_part(isqrt * p * isqrt);
    Eigen::MatrixXcd sigma = ginibre();
    sigma /= sigma.trace().real();
    omega += kronecker(m, sigma);
  }
  return linalg::hermitian_part(omega);
}

}  // namespace sqbench
