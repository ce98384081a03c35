// Oracles shared by the unit and acceptance suites.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "sqbench/sdp.hpp"

namespace sqbench::testing {

inline SectorBlocks random_blocks(const BlockSdp& p, std::mt19937_64& rng, bool real) {
  std::normal_distribution<double> n01;
  SectorBlocks out;
  for (int j = 0; j < p.num_sum_sectors(); ++j) {
    const int d = p.sum_dim(j);
    Eigen::MatrixXcd g(d, d);
    for (int r = 0; r < d; ++r)
      for (int q = 0; q < d; ++q) g(r, q) = cplx(n01(rng), real ? 0.0 : n01(rng));
    out.push_back(g * g.adjoint());
  }
  return out;
}

// Random PSD objective of unit trace; by default supported on j <= c like eta.
inline SectorBlocks random_objective(int c, std::mt19937_64& rng, bool real, bool all_sectors = false) {
  const BlockSdp shape = assemble_problem(c, {});
  SectorBlocks obj = random_blocks(shape, rng, real);
  if (!all_sectors) obj.resize(c + 1);
  double tr = 0;
  for (const auto& b : obj) tr += b.trace().real();
  for (auto& b : obj) b /= tr;
  return obj;
}

// For c = 1 write Omega as w00 |00><00| + w11 |11><11| + [[a, z], [z*, b]] on
// {|01>, |10>}.  Positivity of Omega and Omega^Gamma, and the two row
// inequalities, leave w00 + a <= 1, w11 + b <= 1 and
// |z|^2 <= min(a b, w00 w11).  With E >= 0 both row inequalities are tight at
// the optimum, which leaves a grid over (w00, w11, |z|, arg z).
inline double brute_force_c1(const SectorBlocks& e, int grid, int radial, int phases) {
  const double e0 = e[0](0, 0).real(), e2 = e[2](0, 0).real();
  const double eaa = e[1](0, 0).real(), ebb = e[1](1, 1).real();
  const cplx eba = e[1](1, 0);
  std::vector<cplx> unit(phases);
  for (int p = 0; p < phases; ++p) unit[p] = std::polar(1.0, 2.0 * M_PI * p / phases) * eba;
  double best = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double w00 = double(i) / grid, a = 1.0 - w00;
    for (int k = 0; k <= grid; ++k) {
      const double w11 = double(k) / grid, b = 1.0 - w11;
      const double zmax = std::sqrt(std::min(a * b, w00 * w11));
      const double base = e0 * w00 + e2 * w11 + eaa * a + ebb * b;
      for (int r = 0; r <= radial; ++r)
        for (int p = 0; p < phases; ++p) best = std::max(best, base + 2.0 * zmax * r / radial * unit[p].real());
    }
  }
  return best;
}

}  // namespace sqbench::testing
