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

// PPT relaxation of the measure-and-prepare benchmark, truncated to
// photon numbers <= c in each mode:
//
//   max  Tr(Omega E)   s.t.  Omega >= 0,  Omega^Gamma >= 0,  Tr_B Omega <= 1_A,
//
// with Omega supported on {|k, l> : k, l <= c}.  Omega is restricted to be
// block diagonal in the sum sectors j = k + l; its partial transpose is then
// block diagonal in the difference sectors m = k - l and Tr_B Omega is
// diagonal, so the partial-trace constraint becomes one scalar inequality
// per k.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sqbench/conic.hpp"
#include "sqbench/ensemble.hpp"
#include "sqbench/errors.hpp"
#include "sqbench/linalg.hpp"

namespace sqbench {

struct SectorState {
  int k = 0;  // photons in A (input)
  int l = 0;  // photons in B (output)
};

/// Entry (sum_row, sum_col) of sum sector j is entry (diff_row, diff_col) of
/// difference sector diff_sector after partial transposition.
struct TransposeLink {
  int sum_sector;
  int sum_row;
  int sum_col;
  int diff_sector;
  int diff_row;
  int diff_col;
};

struct BlockSdp {
  int cutoff = 0;
  /// Objective per sum sector j = 0..2c, on sum_basis[j].
  std::vector<Eigen::MatrixXcd> objective;
  std::vector<std::vector<SectorState>> sum_basis;
  /// Difference sector m = -c..c stored at index m + c.
  std::vector<std::vector<SectorState>> diff_basis;
  std::vector<TransposeLink> links;
  bool real_objective = true;

  int num_sum_sectors() const { return 2 * cutoff + 1; }
  int num_diff_sectors() const { return 2 * cutoff + 1; }
  int sum_dim(int j) const { return static_cast<int>(sum_basis[j].size()); }
  int diff_dim(int idx) const { return static_cast<int>(diff_basis[idx].size()); }
  int num_row_constraints() const { return cutoff + 1; }
  int sum_position(int k, int l) const { return k - std::max(0, k + l - cutoff); }
  int diff_position(int k, int l) const { return k - std::max(0, k - l); }
};

using SectorBlocks = std::vector<Eigen::MatrixXcd>;

namespace detail {

inline void build_structure(BlockSdp& p) {
  const int c = p.cutoff;
  p.sum_basis.assign(2 * c + 1, {});
  p.diff_basis.assign(2 * c + 1, {});
  for (int j = 0; j <= 2 * c; ++j)
    for (int k = std::max(0, j - c); k <= std::min(j, c); ++k) p.sum_basis[j].push_back({k, j - k});
  for (int m = -c; m <= c; ++m)
    for (int k = std::max(0, m); k <= std::min(c, c + m); ++k) p.diff_basis[m + c].push_back({k, k - m});

  std::vector<Eigen::MatrixXi> hit;
  for (const auto& basis : p.diff_basis) hit.emplace_back(Eigen::MatrixXi::Zero(basis.size(), basis.size()));
  p.links.clear();
  for (int j = 0; j <= 2 * c; ++j) {
    const auto& basis = p.sum_basis[j];
    for (int r = 0; r < int(basis.size()); ++r)
      for (int q = 0; q < int(basis.size()); ++q) {
        // <k,l|Omega|k',l'>  ->  <k,l'|Omega^Gamma|k',l>
        const int k = basis[r].k, l = basis[r].l;
        const int k2 = basis[q].k, l2 = basis[q].l;
        const int m = k - l2;
        if (m != k2 - l) throw integrity_error("assemble_problem: partial transpose leaves the difference sector");
        const TransposeLink link{j, r, q, m + c, p.diff_position(k, l2), p.diff_position(k2, l)};
        if (p.diff_basis[link.diff_sector][link.diff_row].k != k ||
            p.diff_basis[link.diff_sector][link.diff_col].k != k2)
          throw integrity_error("assemble_problem: inconsistent difference-sector index");
        ++hit[link.diff_sector](link.diff_row, link.diff_col);
        p.links.push_back(link);
      }
  }
  for (const auto& h : hit)
    if (h.size() > 0 && (h.minCoeff() != 1 || h.maxCoeff() != 1))
      throw integrity_error("assemble_problem: partial transpose is not a bijection between sectors");
}

}  // namespace detail

/// General entry point: objective blocks for sum sectors 0..n-1 (n <= 2c+1);
/// missing sectors are zero.
inline BlockSdp assemble_problem(int cutoff, const SectorBlocks& objective) {
  if (cutoff < 0) throw domain_error("assemble_problem: cutoff must be non-negative");
  BlockSdp p;
  p.cutoff = cutoff;
  detail::build_structure(p);
  if (objective.size() > std::size_t(p.num_sum_sectors()))
    throw integrity_error("assemble_problem: more objective blocks than sum sectors");
  p.objective.resize(p.num_sum_sectors());
  p.real_objective = true;
  for (int j = 0; j < p.num_sum_sectors(); ++j) {
    const int d = p.sum_dim(j);
    if (std::size_t(j) < objective.size()) {
      if (objective[j].rows() != d || objective[j].cols() != d)
        throw integrity_error("assemble_problem: objective block " + std::to_string(j) + " has wrong dimension");
      const double herm = (objective[j] - objective[j].adjoint()).cwiseAbs().maxCoeff();
      if (herm > 1e-10) throw integrity_error("assemble_problem: objective block is not Hermitian");
      p.objective[j] = linalg::hermitian_part(objective[j]);
      if (p.objective[j].imag().cwiseAbs().maxCoeff() != 0.0) p.real_objective = false;
    } else {
      p.objective[j] = Eigen::MatrixXcd::Zero(d, d);
    }
  }
  return p;
}

inline BlockSdp assemble_problem(const EtaBlocks& eta) {
  for (const auto& b : eta.blocks)
    if (linalg::min_eigenvalue(b) < -1e-9) throw integrity_error("assemble_problem: eta block is not positive");
  return assemble_problem(eta.cutoff, eta.blocks);
}

inline SectorBlocks zero_sum_blocks(const BlockSdp& p) {
  SectorBlocks out;
  for (int j = 0; j < p.num_sum_sectors(); ++j) out.emplace_back(Eigen::MatrixXcd::Zero(p.sum_dim(j), p.sum_dim(j)));
  return out;
}

/// Omega (sum sectors) -> Omega^Gamma (difference sectors).
inline SectorBlocks partial_transpose(const BlockSdp& p, const SectorBlocks& sum_blocks) {
  SectorBlocks out;
  for (int i = 0; i < p.num_diff_sectors(); ++i) out.emplace_back(Eigen::MatrixXcd::Zero(p.diff_dim(i), p.diff_dim(i)));
  for (const auto& ln : p.links) out[ln.diff_sector](ln.diff_row, ln.diff_col) = sum_blocks[ln.sum_sector](ln.sum_row, ln.sum_col);
  return out;
}

/// Inverse of partial_transpose(); the partial transpose is an involution.
inline SectorBlocks partial_transpose_back(const BlockSdp& p, const SectorBlocks& diff_blocks) {
  SectorBlocks out = zero_sum_blocks(p);
  for (const auto& ln : p.links) out[ln.sum_sector](ln.sum_row, ln.sum_col) = diff_blocks[ln.diff_sector](ln.diff_row, ln.diff_col);
  return out;
}

/// Diagonal of Tr_B Omega.
inline Eigen::VectorXd reduced_diagonal(const BlockSdp& p, const SectorBlocks& sum_blocks) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(p.cutoff + 1);
  for (int j = 0; j < p.num_sum_sectors(); ++j)
    for (int q = 0; q < p.sum_dim(j); ++q) r(p.sum_basis[j][q].k) += sum_blocks[j](q, q).real();
  return r;
}

inline double objective_value(const BlockSdp& p, const SectorBlocks& sum_blocks) {
  double v = 0.0;
  for (int j = 0; j < p.num_sum_sectors(); ++j) v += (p.objective[j] * sum_blocks[j]).trace().real();
  return v;
}

/// Sum-sector blocks as one dense operator on C^{c+1} (x) C^{c+1}.
inline Eigen::MatrixXcd dense_operator(const BlockSdp& p, const SectorBlocks& sum_blocks) {
  const int d = p.cutoff + 1;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int j = 0; j < p.num_sum_sectors(); ++j)
    for (int r = 0; r < p.sum_dim(j); ++r)
      for (int q = 0; q < p.sum_dim(j); ++q) {
        const auto a = p.sum_basis[j][r];
        const auto b = p.sum_basis[j][q];
        out(a.k * d + a.l, b.k * d + b.l) = sum_blocks[j](r, q);
      }
  return out;
}

// ---------------------------------------------------------------------------
// Encoding as a real standard-form SDP.  The variables y are the real
// parameters of Omega; the slack S collects the sum blocks, the difference
// blocks and the c+1 scalar slacks 1 - (Tr_B Omega)_kk.  Complex Hermitian
// blocks are embedded as [[Re, -Im], [Im, Re]].

struct SdpVariable {
  int sector;
  int row;
  int col;
  bool imaginary;
};

struct ConicEncoding {
  conic::Problem problem;
  std::vector<SdpVariable> vars;
  bool real = true;
  int diff_offset = 0;
  int row_offset = 0;
};

namespace detail {

inline void add_hermitian(std::vector<conic::Entry>& out, int block, int d, bool real, int r, int c, cplx v,
                          double scale) {
  if (real) {
    out.push_back({block, std::min(r, c), std::max(r, c), scale * v.real()});
    return;
  }
  if (v.real() != 0.0) {
    out.push_back({block, std::min(r, c), std::max(r, c), scale * v.real()});
    out.push_back({block, std::min(r, c) + d, std::max(r, c) + d, scale * v.real()});
  }
  if (v.imag() != 0.0 && r != c) {
    out.push_back({block, r, c + d, -scale * v.imag()});
    out.push_back({block, c, r + d, scale * v.imag()});
  }
}

}  // namespace detail

inline ConicEncoding encode(const BlockSdp& p, bool real) {
  ConicEncoding enc;
  enc.real = real;
  const int nsum = p.num_sum_sectors();
  const int ndiff = p.num_diff_sectors();
  const int mult = real ? 1 : 2;
  auto& cp = enc.problem;
  for (int j = 0; j < nsum; ++j) cp.block_dims.push_back(mult * p.sum_dim(j));
  enc.diff_offset = nsum;
  for (int i = 0; i < ndiff; ++i) cp.block_dims.push_back(mult * p.diff_dim(i));
  enc.row_offset = nsum + ndiff;
  for (int k = 0; k <= p.cutoff; ++k) cp.block_dims.push_back(1);

  // Position of each sum entry in its difference sector.
  std::vector<Eigen::MatrixXi> link_of(nsum);
  for (int j = 0; j < nsum; ++j) link_of[j] = Eigen::MatrixXi::Constant(p.sum_dim(j), p.sum_dim(j), -1);
  for (std::size_t i = 0; i < p.links.size(); ++i) {
    const auto& ln = p.links[i];
    link_of[ln.sum_sector](ln.sum_row, ln.sum_col) = static_cast<int>(i);
  }

  std::vector<double> b;
  for (int j = 0; j < nsum; ++j) {
    const int d = p.sum_dim(j);
    for (int r = 0; r < d; ++r)
      for (int q = r; q < d; ++q)
        for (int part = 0; part < (real || r == q ? 1 : 2); ++part) {
          const bool imag = part == 1;
          SdpVariable var{j, r, q, imag};
          const cplx coef = imag ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
          std::vector<conic::Entry> entries;
          detail::add_hermitian(entries, j, d, real, r, q, coef, -1.0);
          const auto& ln = p.links[link_of[j](r, q)];
          detail::add_hermitian(entries, enc.diff_offset + ln.diff_sector, p.diff_dim(ln.diff_sector), real,
                                ln.diff_row, ln.diff_col, coef, -1.0);
          if (r == q) entries.push_back({enc.row_offset + p.sum_basis[j][r].k, 0, 0, 1.0});
          const cplx e = p.objective[j](r, q);
          b.push_back(r == q ? e.real() : (imag ? 2.0 * e.imag() : 2.0 * e.real()));
          cp.a.push_back(std::move(entries));
          enc.vars.push_back(var);
        }
  }
  cp.b = Eigen::Map<Eigen::VectorXd>(b.data(), Eigen::Index(b.size()));
  for (int k = 0; k <= p.cutoff; ++k) cp.c.push_back({enc.row_offset + k, 0, 0, 1.0});
  return enc;
}

inline SectorBlocks decode_primal(const BlockSdp& p, const ConicEncoding& enc, const Eigen::VectorXd& y) {
  SectorBlocks om = zero_sum_blocks(p);
  for (std::size_t i = 0; i < enc.vars.size(); ++i) {
    const auto& v = enc.vars[i];
    if (v.imaginary) {
      om[v.sector](v.row, v.col) += cplx(0.0, y(i));
      om[v.sector](v.col, v.row) -= cplx(0.0, y(i));
    } else {
      om[v.sector](v.row, v.col) += y(i);
      if (v.row != v.col) om[v.sector](v.col, v.row) += y(i);
    }
  }
  return om;
}

namespace detail {

// Complex Y with Re Tr(H Y) = Tr(emb(H) X) for every Hermitian H.
inline Eigen::MatrixXcd de_embed(const Eigen::MatrixXd& x, bool real) {
  if (real) return x.cast<cplx>();
  const Eigen::Index d = x.rows() / 2;
  Eigen::MatrixXcd y(d, d);
  y.real() = x.topLeftCorner(d, d) + x.bottomRightCorner(d, d);
  y.imag() = x.bottomLeftCorner(d, d) - x.topRightCorner(d, d);
  return y;
}

}  // namespace detail

// ---------------------------------------------------------------------------

enum class SdpStatus { optimal, slow_progress, infeasible };
enum class SdpBackend { interior_point, admm };

constexpr std::string_view to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::slow_progress: return "slow_progress";
    case SdpStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

constexpr std::string_view to_string(SdpBackend b) {
  return b == SdpBackend::interior_point ? "interior_point" : "admm";
}

struct SdpOptions {
  double tol = 1e-7;
  SdpBackend backend = SdpBackend::interior_point;
  int max_iterations = 100;
  /// Solve in complex arithmetic even when the objective is real.
  bool force_complex = false;
  conic::AdmmOptions admm = {};
};

struct SdpSolution {
  /// Objective of the repaired, exactly feasible primal blocks.
  double primal_value = 0.0;
  /// Certified upper bound from the repaired dual certificate.
  double dual_value = 0.0;
  double gap = 0.0;
  /// Backend objectives before any repair.
  double raw_primal_objective = 0.0;
  double raw_dual_objective = 0.0;
  SectorBlocks primal_blocks;
  SectorBlocks dual_difference_blocks;
  Eigen::VectorXd dual_row_multipliers;
  double primal_shift = 0.0;
  double primal_scale = 1.0;
  double dual_shift = 0.0;
  bool repair_warning = false;
  int iterations = 0;
  SdpStatus status = SdpStatus::slow_progress;
  SdpBackend backend = SdpBackend::interior_point;
  bool real_arithmetic = true;
  double tol = 0.0;
  double solve_ms = 0.0;
  std::vector<conic::Iterate> trace;
};

struct DualCertificate {
  double value = 0.0;
  /// Uniform increase of every row multiplier needed for dual feasibility.
  double shift = 0.0;
  bool warning = false;
};

/// Weak-duality bound from any difference-sector multipliers Y and row
/// multipliers z: Y is clipped to the PSD cone, z to z >= 0, and z is raised
/// uniformly until z (x) 1 - E - Gamma(Y) >= 0 on every sum sector.
inline DualCertificate certify(const BlockSdp& p, const SectorBlocks& diff_multipliers, const Eigen::VectorXd& rows) {
  if (int(diff_multipliers.size()) != p.num_diff_sectors() || rows.size() != p.cutoff + 1)
    throw integrity_error("certify: certificate does not match the problem");
  SectorBlocks y;
  for (const auto& b : diff_multipliers) y.push_back(linalg::clip_psd(b));
  const Eigen::VectorXd z = rows.cwiseMax(0.0);
  const SectorBlocks gy = partial_transpose_back(p, y);
  double shift = 0.0;
  double scale = 0.0;
  for (int j = 0; j < p.num_sum_sectors(); ++j) {
    Eigen::MatrixXcd x = -p.objective[j] - gy[j];
    for (int q = 0; q < p.sum_dim(j); ++q) x(q, q) += z(p.sum_basis[j][q].k);
    shift = std::max(shift, -linalg::min_eigenvalue(x));
    scale = std::max(scale, x.cwiseAbs().maxCoeff() * double(x.rows()));
  }
  DualCertificate out;
  // Margin for eigenvalue rounding.
  out.shift = std::max(0.0, shift) + 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + scale);
  out.value = z.sum() + double(p.cutoff + 1) * out.shift;
  out.warning = double(p.cutoff + 1) * out.shift > 0.01;
  return out;
}

namespace detail {

struct FeasiblePrimal {
  SectorBlocks blocks;
  double shift = 0.0;
  double scale = 1.0;
};

// Clip Omega to PSD, add delta * 1 so that Omega^Gamma >= 0, then rescale
// until every row of Tr_B Omega is at most one.
inline FeasiblePrimal make_feasible(const BlockSdp& p, SectorBlocks om, bool real) {
  for (auto& b : om) {
    b = linalg::clip_psd(b);
    if (real) b = b.real().cast<cplx>();
  }
  const SectorBlocks pt = partial_transpose(p, om);
  double delta = 0.0;
  for (const auto& b : pt) delta = std::max(delta, -linalg::min_eigenvalue(b));
  FeasiblePrimal out;
  if (delta > 0.0) {
    delta *= 1.0 + 1e-12;
    for (auto& b : om) b += delta * Eigen::MatrixXcd::Identity(b.rows(), b.cols());
  }
  out.shift = delta;
  const double rmax = reduced_diagonal(p, om).maxCoeff();
  if (rmax > 1.0) {
    out.scale = rmax * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
    for (auto& b : om) b /= out.scale;
  }
  out.blocks = std::move(om);
  return out;
}

}  // namespace detail

inline SdpSolution solve(const BlockSdp& p, const SdpOptions& opt = {}) {
  if (!(opt.tol > 0.0)) throw domain_error("solve: tolerance must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const bool real = p.real_objective && !opt.force_complex;
  const ConicEncoding enc = encode(p, real);

  conic::Result res;
  if (opt.backend == SdpBackend::interior_point) {
    conic::InteriorPointOptions ipm;
    ipm.tol = opt.tol;
    ipm.max_iterations = opt.max_iterations;
    res = conic::solve_interior_point(enc.problem, ipm);
  } else {
    res = conic::solve_admm(enc.problem, opt.admm);
  }

  SdpSolution sol;
  sol.backend = opt.backend;
  sol.real_arithmetic = real;
  sol.tol = opt.tol;
  sol.iterations = res.iterations;
  sol.trace = res.trace;
  sol.status = res.status == conic::Status::optimal         ? SdpStatus::optimal
               : res.status == conic::Status::infeasible ? SdpStatus::infeasible
                                                             : SdpStatus::slow_progress;
  sol.raw_primal_objective = enc.problem.b.dot(res.y);
  sol.raw_dual_objective = conic::dot(conic::dense_c(enc.problem), res.x);

  auto feasible = detail::make_feasible(p, decode_primal(p, enc, res.y), real);
  sol.primal_blocks = std::move(feasible.blocks);
  sol.primal_shift = feasible.shift;
  sol.primal_scale = feasible.scale;
  sol.primal_value = objective_value(p, sol.primal_blocks);

  for (int i = 0; i < p.num_diff_sectors(); ++i)
    sol.dual_difference_blocks.push_back(detail::de_embed(res.x[enc.diff_offset + i], real));
  sol.dual_row_multipliers.resize(p.cutoff + 1);
  for (int k = 0; k <= p.cutoff; ++k) sol.dual_row_multipliers(k) = res.x[enc.row_offset + k](0, 0);

  const DualCertificate cert = certify(p, sol.dual_difference_blocks, sol.dual_row_multipliers);
  sol.dual_value = cert.value;
  sol.dual_shift = cert.shift;
  sol.repair_warning = cert.warning;
  sol.gap = std::max(0.0, sol.dual_value - sol.primal_value);
  sol.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

inline SdpSolution solve(const BlockSdp& p, double tol) {
  SdpOptions opt;
  opt.tol = tol;
  return solve(p, opt);
}

/// Rigorous (up to rounding) upper bound on the truncated SDP optimum.
inline double certified_upper_bound(const BlockSdp& p, const SdpSolution& sol) {
  if (sol.status == SdpStatus::infeasible) throw integrity_error("certified_upper_bound: solver reported infeasibility");
  return certify(p, sol.dual_difference_blocks, sol.dual_row_multipliers).value;
}

}  // namespace sqbench
