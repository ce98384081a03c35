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

// Ensemble operator for a rotationally symmetric squeezed-state ensemble,
// stored as total-photon-number blocks.
//
// Block j acts on span{|k>_A |j-k>_B : k = 0..j} with entries
//
//   eta_j(k1, k2) = sum_samples w  A(k1, k2) B(j-k1, j-k2),
//
// A = <.|N_lambda(rho_{s,xi})|.>, B = <.|rho_{s,xi}|.>.  Twirling over
// U_theta (x) U_theta is exactly the projection onto these blocks, so the
// squeezing axis of every sample is held fixed.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <thread>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sqbench/errors.hpp"
#include "sqbench/fock.hpp"
#include "sqbench/phase_space.hpp"

namespace sqbench {

struct WeightedDisplacement {
  Eigen::Vector2d xi = Eigen::Vector2d::Zero();  // first moments
  double weight = 1.0;
};

/// q(xi) = alpha/pi exp(-alpha |xi|^2).
struct GaussianIsotropic {
  double alpha = 1.0;
};
/// q(xi) = delta(|xi|^2): randomly rotated, undisplaced states.
struct DeltaAtOrigin {};
struct ExplicitSamples {
  std::vector<WeightedDisplacement> samples;
};

using Prior = std::variant<GaussianIsotropic, DeltaAtOrigin, ExplicitSamples>;

struct EnsembleSpec {
  double squeezing = 1.0;
  double transmissivity = 1.0;
  Prior prior = DeltaAtOrigin{};
  int cutoff = 10;
  int samples = 8192;
  /// Pair every Gaussian QMC point xi with its mirror image (xi_x, -xi_y).
  /// The prior is mirror symmetric, so this keeps the estimator unbiased and
  /// makes eta real.
  bool mirror_symmetrize = true;
  int threads = 1;

  void validate() const {
    if (!(squeezing > 0.0) || !std::isfinite(squeezing)) throw domain_error("EnsembleSpec: squeezing must be positive");
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0))
      throw domain_error("EnsembleSpec: transmissivity must lie in [0,1]");
    if (cutoff < 0) throw domain_error("EnsembleSpec: cutoff must be non-negative");
    if (samples < 1) throw domain_error("EnsembleSpec: need at least one sample");
    if (const auto* g = std::get_if<GaussianIsotropic>(&prior); g && !(g->alpha > 0.0))
      throw domain_error("EnsembleSpec: alpha must be positive");
    if (const auto* e = std::get_if<ExplicitSamples>(&prior)) {
      if (e->samples.empty()) throw domain_error("EnsembleSpec: explicit prior without samples");
      double total = 0.0;
      for (const auto& s : e->samples) {
        if (!(s.weight >= 0.0)) throw domain_error("EnsembleSpec: negative sample weight");
        total += s.weight;
      }
      if (std::abs(total - 1.0) > 1e-9) throw domain_error("EnsembleSpec: sample weights must sum to one");
    }
  }
};

/// Radical inverse of n in the given base.
inline double radical_inverse(std::uint64_t n, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (n > 0) {
    r += f * double(n % base);
    n /= base;
    f *= inv;
  }
  return r;
}

/// First n points of the two-dimensional Halton sequence, index starting at 1.
inline std::vector<std::array<double, 2>> halton_points(int n, std::array<unsigned, 2> bases = {2, 3}) {
  if (n < 1) throw domain_error("halton_points: n must be positive");
  std::vector<std::array<double, 2>> pts(n);
  for (int i = 0; i < n; ++i) {
    pts[i] = {radical_inverse(std::uint64_t(i) + 1, bases[0]), radical_inverse(std::uint64_t(i) + 1, bases[1])};
  }
  return pts;
}

/// Polar Box-Muller map of Halton points onto q(xi); |xi|^2 is exponential
/// with rate alpha, so each coordinate has variance 1/(2 alpha).
inline std::vector<WeightedDisplacement> sample_displacements(const EnsembleSpec& spec) {
  spec.validate();
  if (std::holds_alternative<DeltaAtOrigin>(spec.prior)) return {WeightedDisplacement{}};
  if (const auto* e = std::get_if<ExplicitSamples>(&spec.prior)) return e->samples;
  const double alpha = std::get<GaussianIsotropic>(spec.prior).alpha;
  const auto pts = halton_points(spec.samples);
  std::vector<WeightedDisplacement> out(pts.size());
  const double w = 1.0 / double(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double radius = std::sqrt(-std::log1p(-pts[i][0]) / alpha);
    const double angle = 2.0 * std::numbers::pi * pts[i][1];
    out[i].xi = Eigen::Vector2d(radius * std::cos(angle), radius * std::sin(angle));
    out[i].weight = w;
  }
  return out;
}

struct EtaBlocks {
  int cutoff = 0;
  /// blocks[j] is (j+1) x (j+1) on the basis |k, j-k>, k = 0..j.
  std::vector<Eigen::MatrixXcd> blocks;
  double trace_captured = 0.0;
  double hermiticity_residual = 0.0;

  bool is_real(double tol = 0.0) const {
    for (const auto& b : blocks)
      if (b.imag().cwiseAbs().maxCoeff() > tol) return false;
    return true;
  }
};

namespace detail {

// Kahan-compensated accumulator over the eta blocks.
struct BlockAccumulator {
  std::vector<Eigen::MatrixXd> re, im, re_c, im_c;

  explicit BlockAccumulator(int cutoff) {
    for (int j = 0; j <= cutoff; ++j) {
      re.emplace_back(Eigen::MatrixXd::Zero(j + 1, j + 1));
      im.push_back(re.back());
      re_c.push_back(re.back());
      im_c.push_back(re.back());
    }
  }

  static void kahan(double& sum, double& comp, double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }

  void add(int j, int r, int c, cplx x) {
    kahan(re[j](r, c), re_c[j](r, c), x.real());
    kahan(im[j](r, c), im_c[j](r, c), x.imag());
  }

  void add(const BlockAccumulator& o) {
    for (std::size_t j = 0; j < re.size(); ++j)
      for (Eigen::Index r = 0; r < re[j].rows(); ++r)
        for (Eigen::Index c = 0; c < re[j].cols(); ++c) {
          kahan(re[j](r, c), re_c[j](r, c), o.re[j](r, c));
          kahan(im[j](r, c), im_c[j](r, c), o.im[j](r, c));
        }
  }
};

// Fixed chunking makes the reduction order, and therefore every bit of the
// result, independent of the thread count.
inline constexpr int kEtaChunks = 64;

}  // namespace detail

inline EtaBlocks build_eta(const EnsembleSpec& spec) {
  spec.validate();
  const auto samples = sample_displacements(spec);
  const int c = spec.cutoff;
  const bool mirror = spec.mirror_symmetrize && std::holds_alternative<GaussianIsotropic>(spec.prior);
  const GaussianState base = squeezed_state(spec.squeezing);

  const int chunks = std::min<int>(detail::kEtaChunks, int(samples.size()));
  std::vector<detail::BlockAccumulator> partial(chunks, detail::BlockAccumulator(c));

  auto run_chunk = [&](int chunk) {
    const std::size_t lo = samples.size() * chunk / chunks;
    const std::size_t hi = samples.size() * (chunk + 1) / chunks;
    auto& acc = partial[chunk];
    for (std::size_t i = lo; i < hi; ++i) {
      GaussianState pure = base;
      pure.disp = samples[i].xi;
      const FockMatrix bm = fock_matrix(pure, c);
      const FockMatrix am = fock_matrix(apply_attenuation(pure, spec.transmissivity), c);
      const double w = samples[i].weight;
      for (int j = 0; j <= c; ++j)
        for (int k1 = 0; k1 <= j; ++k1)
          for (int k2 = 0; k2 <= j; ++k2) {
            cplx term = w * am.entries(k1, k2) * bm.entries(j - k1, j - k2);
            // The mirror sample contributes the complex conjugate.
            if (mirror) term = cplx(term.real(), 0.0);
            acc.add(j, k1, k2, term);
          }
    }
  };

  const int nthreads = std::max(1, std::min(spec.threads, chunks));
  if (nthreads == 1) {
    for (int ch = 0; ch < chunks; ++ch) run_chunk(ch);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&, t] {
        for (int ch = t; ch < chunks; ch += nthreads) run_chunk(ch);
      });
    for (auto& th : pool) th.join();
  }

  detail::BlockAccumulator total(c);
  for (const auto& p : partial) total.add(p);

  EtaBlocks eta;
  eta.cutoff = c;
  for (int j = 0; j <= c; ++j) {
    Eigen::MatrixXcd blk(j + 1, j + 1);
    blk.real() = total.re[j];
    blk.imag() = total.im[j];
    const Eigen::MatrixXcd adj = blk.adjoint();
    eta.hermiticity_residual = std::max(eta.hermiticity_residual, 0.5 * (blk - adj).cwiseAbs().maxCoeff());
    blk = 0.5 * (blk + adj);
    eta.trace_captured += blk.trace().real();
    eta.blocks.push_back(std::move(blk));
  }
  return eta;
}

/// 1 - Tr(P_c eta P_c): weight of the ensemble operator beyond the cutoff.
inline double truncation_error(const EtaBlocks& e) {
  if (e.trace_captured > 1.0 + 1e-9) throw integrity_error("truncation_error: captured trace exceeds one");
  const double eps = 1.0 - e.trace_captured;
  return eps < 0.0 ? 0.0 : eps;
}

}  // namespace sqbench
