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

// Dense block-diagonal semidefinite programs in standard form
//
//   (P)  min  C . X      s.t.  A_i . X = b_i,  X >= 0
//   (D)  max  b^T y      s.t.  S = C - sum_i y_i A_i >= 0
//
// with every A_i and C sparse.  Two backends share this representation: a
// primal-dual interior-point method (HKM direction, Mehrotra
// predictor-corrector, infeasible start) and a scaled ADMM splitting used as
// an independent cross-check.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "sqbench/errors.hpp"

namespace sqbench::conic {

/// Entry of a symmetric matrix; an off-diagonal entry stands for both (row, col) and (col, row).
struct Entry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct Problem {
  std::vector<int> block_dims;
  std::vector<std::vector<Entry>> a;
  Eigen::VectorXd b;
  std::vector<Entry> c;

  int num_vars() const { return static_cast<int>(a.size()); }
  int total_dim() const {
    int n = 0;
    for (int d : block_dims) n += d;
    return n;
  }
};

using BlockMatrix = std::vector<Eigen::MatrixXd>;

enum class Status { optimal, slow_progress, infeasible };

struct Iterate {
  int iteration = 0;
  double primal_objective = 0.0;  // C . X
  double dual_objective = 0.0;    // b^T y
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double mu = 0.0;
  double step_primal = 0.0;
  double step_dual = 0.0;
};

struct Result {
  Eigen::VectorXd y;
  BlockMatrix x;
  BlockMatrix s;
  Status status = Status::slow_progress;
  int iterations = 0;
  std::vector<Iterate> trace;
};

struct InteriorPointOptions {
  double tol = 1e-7;
  int max_iterations = 100;
  double step_fraction = 0.95;
};

struct AdmmOptions {
  double tol = 1e-9;
  int max_iterations = 200000;
  double rho = 1.0;
  double relaxation = 1.6;
};

// ---------------------------------------------------------------------------
// Block-matrix helpers

inline BlockMatrix zeros(const Problem& p) {
  BlockMatrix m;
  for (int d : p.block_dims) m.emplace_back(Eigen::MatrixXd::Zero(d, d));
  return m;
}

inline BlockMatrix scaled_identity(const Problem& p, double t) {
  BlockMatrix m;
  for (int d : p.block_dims) m.emplace_back(t * Eigen::MatrixXd::Identity(d, d));
  return m;
}

inline void add_entries(BlockMatrix& m, const std::vector<Entry>& entries, double scale) {
  for (const auto& e : entries) {
    m[e.block](e.row, e.col) += scale * e.value;
    if (e.row != e.col) m[e.block](e.col, e.row) += scale * e.value;
  }
}

inline double dot(const std::vector<Entry>& entries, const BlockMatrix& x) {
  double s = 0.0;
  for (const auto& e : entries) {
    s += e.value * x[e.block](e.row, e.col) * (e.row == e.col ? 1.0 : 2.0);
  }
  return s;
}

inline double dot(const BlockMatrix& x, const BlockMatrix& y) {
  double s = 0.0;
  for (std::size_t b = 0; b < x.size(); ++b) s += (x[b].array() * y[b].array()).sum();
  return s;
}

inline double frobenius(const BlockMatrix& x) { return std::sqrt(dot(x, x)); }

inline double frobenius(const std::vector<Entry>& entries) {
  double s = 0.0;
  for (const auto& e : entries) s += e.value * e.value * (e.row == e.col ? 1.0 : 2.0);
  return std::sqrt(s);
}

/// sum_i y_i A_i
inline BlockMatrix adjoint(const Problem& p, const Eigen::VectorXd& y) {
  BlockMatrix m = zeros(p);
  for (int i = 0; i < p.num_vars(); ++i)
    if (y(i) != 0.0) add_entries(m, p.a[i], y(i));
  return m;
}

/// (A_i . X)_i
inline Eigen::VectorXd forward(const Problem& p, const BlockMatrix& x) {
  Eigen::VectorXd v(p.num_vars());
  for (int i = 0; i < p.num_vars(); ++i) v(i) = dot(p.a[i], x);
  return v;
}

inline BlockMatrix dense_c(const Problem& p) {
  BlockMatrix m = zeros(p);
  add_entries(m, p.c, 1.0);
  return m;
}

inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

inline Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m) {
  if (m.rows() == 1) return m.cwiseMax(0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m));
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

namespace detail {

// Largest t <= 1e30 with x + t dx >= 0, for x > 0.
inline double max_step(const Eigen::MatrixXd& x, const Eigen::MatrixXd& dx) {
  if (x.rows() == 1) {
    return dx(0, 0) < 0.0 ? -x(0, 0) / dx(0, 0) : 1e30;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  Eigen::MatrixXd g = llt.matrixL().solve(dx);
  g = llt.matrixL().solve(g.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(g), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin < 0.0 ? -1.0 / lmin : 1e30;
}

inline double max_step(const BlockMatrix& x, const BlockMatrix& dx) {
  double t = 1e30;
  for (std::size_t b = 0; b < x.size(); ++b) t = std::min(t, max_step(x[b], dx[b]));
  return t;
}

struct FullEntry {
  int var;
  int row;
  int col;
  double value;
};

// Per block: the constraint entries grouped by variable, both triangles expanded.
struct BlockIndex {
  std::vector<int> vars;
  std::vector<int> offsets;  // into entries, size vars.size() + 1
  std::vector<FullEntry> entries;
};

inline std::vector<BlockIndex> index_blocks(const Problem& p) {
  std::vector<std::vector<std::vector<FullEntry>>> tmp(p.block_dims.size());
  std::vector<std::vector<int>> seen(p.block_dims.size());
  for (int i = 0; i < p.num_vars(); ++i) {
    for (const auto& e : p.a[i]) {
      auto& vs = seen[e.block];
      if (vs.empty() || vs.back() != i) {
        vs.push_back(i);
        tmp[e.block].emplace_back();
      }
      tmp[e.block].back().push_back({i, e.row, e.col, e.value});
      if (e.row != e.col) tmp[e.block].back().push_back({i, e.col, e.row, e.value});
    }
  }
  std::vector<BlockIndex> out(p.block_dims.size());
  for (std::size_t b = 0; b < out.size(); ++b) {
    out[b].vars = seen[b];
    out[b].offsets.push_back(0);
    for (const auto& list : tmp[b]) {
      out[b].entries.insert(out[b].entries.end(), list.begin(), list.end());
      out[b].offsets.push_back(static_cast<int>(out[b].entries.size()));
    }
  }
  return out;
}

// M_ij = sum_b Tr(A_i X A_j W), W = S^{-1}; upper triangle only.
inline void schur_complement(const std::vector<BlockIndex>& index, const BlockMatrix& x, const BlockMatrix& w,
                             Eigen::MatrixXd& m) {
  m.setZero();
  for (std::size_t b = 0; b < index.size(); ++b) {
    const auto& bi = index[b];
    const Eigen::MatrixXd& xb = x[b];
    const Eigen::MatrixXd& wb = w[b];
    const int nv = static_cast<int>(bi.vars.size());
    for (int ia = 0; ia < nv; ++ia) {
      const int va = bi.vars[ia];
      for (int ib = ia; ib < nv; ++ib) {
        const int vb = bi.vars[ib];
        double s = 0.0;
        for (int e = bi.offsets[ia]; e < bi.offsets[ia + 1]; ++e) {
          const auto& ea = bi.entries[e];
          for (int f = bi.offsets[ib]; f < bi.offsets[ib + 1]; ++f) {
            const auto& fb = bi.entries[f];
            s += ea.value * fb.value * xb(ea.col, fb.row) * wb(fb.col, ea.row);
          }
        }
        const int r = std::min(va, vb);
        const int c = std::max(va, vb);
        m(r, c) += s;
      }
    }
  }
}

inline double relative_gap(double pobj, double dobj) {
  return std::abs(pobj - dobj) / std::max(1.0, 0.5 * (std::abs(pobj) + std::abs(dobj)));
}

}  // namespace detail

inline Result solve_interior_point(const Problem& p, const InteriorPointOptions& opt = {}) {
  const int m = p.num_vars();
  const int n = p.total_dim();
  if (m == 0) throw integrity_error("solve_interior_point: no variables");
  const auto index = detail::index_blocks(p);
  const BlockMatrix cmat = dense_c(p);
  const double norm_b = p.b.norm();
  const double norm_c = frobenius(cmat);

  // Infeasible start scaled to the data.
  double max_a = 0.0;
  double ratio = 0.0;
  for (int i = 0; i < m; ++i) {
    const double na = frobenius(p.a[i]);
    max_a = std::max(max_a, na);
    ratio = std::max(ratio, (1.0 + std::abs(p.b(i))) / (1.0 + na));
  }
  const double x0 = std::max(10.0, std::sqrt(double(n)) * ratio);
  const double s0 = std::max(10.0, (1.0 + std::max(max_a, norm_c)) / std::sqrt(double(n)));

  Result res;
  res.x = scaled_identity(p, x0);
  res.s = scaled_identity(p, s0);
  res.y = Eigen::VectorXd::Zero(m);

  Eigen::MatrixXd schur(m, m);
  int stalls = 0;

  for (int iter = 0;; ++iter) {
    BlockMatrix& x = res.x;
    BlockMatrix& s = res.s;
    const Eigen::VectorXd rp = p.b - forward(p, x);
    BlockMatrix rd = cmat;
    {
      const BlockMatrix ay = adjoint(p, res.y);
      for (std::size_t b = 0; b < rd.size(); ++b) rd[b] -= s[b] + ay[b];
    }
    Iterate it;
    it.iteration = iter;
    it.primal_objective = dot(cmat, x);
    it.dual_objective = p.b.dot(res.y);
    it.relative_gap = detail::relative_gap(it.primal_objective, it.dual_objective);
    it.primal_infeasibility = rp.norm() / (1.0 + norm_b);
    it.dual_infeasibility = frobenius(rd) / (1.0 + norm_c);
    const double mu = dot(x, s) / n;
    it.mu = mu;
    if (!res.trace.empty()) {
      it.step_primal = res.trace.back().step_primal;
      it.step_dual = res.trace.back().step_dual;
    }
    res.iterations = iter;

    if (it.relative_gap <= opt.tol && it.primal_infeasibility <= opt.tol && it.dual_infeasibility <= opt.tol) {
      res.trace.push_back(it);
      res.status = Status::optimal;
      return res;
    }
    if (iter >= opt.max_iterations || stalls >= 5 || !std::isfinite(mu)) {
      res.trace.push_back(it);
      res.status = Status::slow_progress;
      return res;
    }
    if (frobenius(x) > 1e14 || res.y.lpNorm<Eigen::Infinity>() > 1e14) {
      res.trace.push_back(it);
      res.status = Status::infeasible;
      return res;
    }

    BlockMatrix w(x.size());
    for (std::size_t b = 0; b < x.size(); ++b) {
      Eigen::LLT<Eigen::MatrixXd> llt(s[b]);
      w[b] = llt.solve(Eigen::MatrixXd::Identity(s[b].rows(), s[b].cols()));
      w[b] = symmetrize(w[b]);
    }
    detail::schur_complement(index, x, w, schur);
    Eigen::LLT<Eigen::MatrixXd> chol;
    {
      double reg = 0.0;
      const double diag_scale = std::max(1e-300, schur.diagonal().cwiseAbs().maxCoeff());
      for (int attempt = 0; attempt < 8; ++attempt) {
        Eigen::MatrixXd work = schur;
        if (reg > 0.0) work.diagonal().array() += reg;
        chol.compute(work.selfadjointView<Eigen::Upper>());
        if (chol.info() == Eigen::Success) break;
        reg = reg == 0.0 ? 1e-14 * diag_scale : reg * 100.0;
      }
      if (chol.info() != Eigen::Success) {
        res.trace.push_back(it);
        res.status = Status::slow_progress;
        return res;
      }
    }

    // Direction for X dS + dX S = r:  dX = (r - X dS) W,  dS = Rd - A*(dy).
    auto direction = [&](const BlockMatrix& r, BlockMatrix& dx, Eigen::VectorXd& dy, BlockMatrix& ds) {
      BlockMatrix t(x.size());
      for (std::size_t b = 0; b < x.size(); ++b) t[b] = symmetrize((r[b] - x[b] * rd[b]) * w[b]);
      const Eigen::VectorXd rhs = rp - forward(p, t);
      dy = chol.solve(rhs);
      ds = rd;
      const BlockMatrix ady = adjoint(p, dy);
      dx.resize(x.size());
      for (std::size_t b = 0; b < x.size(); ++b) {
        ds[b] -= ady[b];
        dx[b] = symmetrize((r[b] - x[b] * ds[b]) * w[b]);
      }
    };

    BlockMatrix r(x.size());
    for (std::size_t b = 0; b < x.size(); ++b) r[b] = -x[b] * s[b];
    BlockMatrix dxa, dsa;
    Eigen::VectorXd dya;
    direction(r, dxa, dya, dsa);
    const double ap_aff = std::min(1.0, detail::max_step(x, dxa));
    const double ad_aff = std::min(1.0, detail::max_step(s, dsa));
    double mu_aff = 0.0;
    for (std::size_t b = 0; b < x.size(); ++b)
      mu_aff += ((x[b] + ap_aff * dxa[b]).array() * (s[b] + ad_aff * dsa[b]).array()).sum();
    mu_aff /= n;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    for (std::size_t b = 0; b < x.size(); ++b) {
      r[b] = sigma * mu * Eigen::MatrixXd::Identity(x[b].rows(), x[b].cols()) - x[b] * s[b] - dxa[b] * dsa[b];
    }
    BlockMatrix dx, ds;
    Eigen::VectorXd dy;
    direction(r, dx, dy, ds);
    const double ap = std::min(1.0, opt.step_fraction * detail::max_step(x, dx));
    const double ad = std::min(1.0, opt.step_fraction * detail::max_step(s, ds));
    if (ap < 1e-8 && ad < 1e-8) ++stalls;
    else stalls = 0;
    for (std::size_t b = 0; b < x.size(); ++b) {
      x[b] = symmetrize(x[b] + ap * dx[b]);
      s[b] = symmetrize(s[b] + ad * ds[b]);
    }
    res.y += ad * dy;
    it.step_primal = ap;
    it.step_dual = ad;
    res.trace.push_back(it);
  }
}

/// Scaled ADMM on (D): min -b^T y  s.t.  A*(y) + S = C, S in the PSD cone.
/// The scaled multiplier times rho converges to an optimal X of (P).
inline Result solve_admm(const Problem& p, const AdmmOptions& opt = {}) {
  const int m = p.num_vars();
  const auto index = detail::index_blocks(p);
  // Gram matrix G_ij = A_i . A_j.
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t b = 0; b < index.size(); ++b) {
    const auto& bi = index[b];
    const int nv = static_cast<int>(bi.vars.size());
    for (int ia = 0; ia < nv; ++ia)
      for (int ib = ia; ib < nv; ++ib) {
        double s = 0.0;
        for (int e = bi.offsets[ia]; e < bi.offsets[ia + 1]; ++e)
          for (int f = bi.offsets[ib]; f < bi.offsets[ib + 1]; ++f) {
            const auto& ea = bi.entries[e];
            const auto& fb = bi.entries[f];
            if (ea.row == fb.row && ea.col == fb.col) s += ea.value * fb.value;
          }
        const int r = std::min(bi.vars[ia], bi.vars[ib]);
        const int c = std::max(bi.vars[ia], bi.vars[ib]);
        gram(r, c) += s;
      }
  }
  Eigen::LLT<Eigen::MatrixXd> chol(gram.selfadjointView<Eigen::Upper>());
  if (chol.info() != Eigen::Success) throw integrity_error("solve_admm: constraint matrices are linearly dependent");

  const BlockMatrix cmat = dense_c(p);
  const double norm_c = frobenius(cmat);
  const double norm_b = p.b.norm();
  double rho = opt.rho;
  Result res;
  res.y = Eigen::VectorXd::Zero(m);
  BlockMatrix s = zeros(p);
  BlockMatrix u = zeros(p);

  for (int iter = 1; iter <= opt.max_iterations; ++iter) {
    BlockMatrix target(s.size());
    for (std::size_t b = 0; b < s.size(); ++b) target[b] = cmat[b] - s[b] - u[b];
    res.y = chol.solve(p.b / rho + forward(p, target));
    const BlockMatrix ay = adjoint(p, res.y);
    BlockMatrix s_prev = s;
    BlockMatrix h(s.size());
    for (std::size_t b = 0; b < s.size(); ++b) {
      h[b] = opt.relaxation * ay[b] + (1.0 - opt.relaxation) * (cmat[b] - s_prev[b]);
      s[b] = project_psd(cmat[b] - h[b] - u[b]);
      u[b] += h[b] + s[b] - cmat[b];
    }

    if (iter % 10 == 0 || iter == opt.max_iterations) {
      double rprim = 0.0;
      BlockMatrix ds(s.size());
      for (std::size_t b = 0; b < s.size(); ++b) {
        rprim += (ay[b] + s[b] - cmat[b]).squaredNorm();
        ds[b] = s[b] - s_prev[b];
      }
      rprim = std::sqrt(rprim);
      const double rdual = rho * forward(p, ds).norm();
      BlockMatrix xm(u.size());
      for (std::size_t b = 0; b < u.size(); ++b) xm[b] = rho * u[b];
      Iterate it;
      it.iteration = iter;
      it.primal_objective = dot(cmat, xm);
      it.dual_objective = p.b.dot(res.y);
      it.relative_gap = detail::relative_gap(it.primal_objective, it.dual_objective);
      it.primal_infeasibility = rdual / (1.0 + norm_b);
      it.dual_infeasibility = rprim / (1.0 + norm_c);
      it.mu = rho;
      res.iterations = iter;
      if (iter % 100 == 0) res.trace.push_back(it);
      if (it.primal_infeasibility <= opt.tol && it.dual_infeasibility <= opt.tol && it.relative_gap <= opt.tol) {
        res.trace.push_back(it);
        res.status = Status::optimal;
        res.s = s;
        res.x = xm;
        return res;
      }
      if (iter % 50 == 0) {
        if (rprim > 10.0 * rdual) {
          rho *= 2.0;
          for (auto& ub : u) ub /= 2.0;
        } else if (rdual > 10.0 * rprim) {
          rho /= 2.0;
          for (auto& ub : u) ub *= 2.0;
        }
      }
    }
  }
  res.status = Status::slow_progress;
  res.s = s;
  res.x = u;
  for (auto& xb : res.x) xb *= rho;
  return res;
}

}  // namespace sqbench::conic
