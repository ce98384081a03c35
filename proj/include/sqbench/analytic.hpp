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

// Closed-form classical benchmarks for squeezed-state ensembles with
// unknown orientation and flat displacement prior.

#pragma once

#include <algorithm>
#include <cmath>
#include <string_view>

#include "sqbench/errors.hpp"

namespace sqbench {

enum class BenchmarkKind { pure, mixed_overlap, uhlmann_bound, ideal_overlap, coherent_gaussian };

constexpr std::string_view to_string(BenchmarkKind k) {
  switch (k) {
    case BenchmarkKind::pure: return "pure";
    case BenchmarkKind::mixed_overlap: return "mixed_overlap";
    case BenchmarkKind::uhlmann_bound: return "uhlmann_bound";
    case BenchmarkKind::ideal_overlap: return "ideal_overlap";
    case BenchmarkKind::coherent_gaussian: return "coherent_gaussian";
  }
  return "unknown";
}

struct BenchmarkValue {
  double value = 0.0;
  BenchmarkKind kind = BenchmarkKind::pure;
  double squeezing = 1.0;
  double noise = 0.0;
  double alpha = 0.0;
  /// ideal_overlap at zero noise: the pure-state self-overlap, reported as 1.
  bool capped = false;
};

namespace detail {
inline void check_squeezing(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw domain_error("squeezing must be positive and finite");
}
inline void check_noise(double eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw domain_error("additive noise must be non-negative");
}
}  // namespace detail

/// sqrt(s)/(1+s); attained by heterodyne-and-reprepare.
inline BenchmarkValue pure_benchmark(double s) {
  detail::check_squeezing(s);
  return {std::sqrt(s) / (1.0 + s), BenchmarkKind::pure, s, 0.0, 0.0, false};
}

/// Maximal classical overlap after additive noise eta.
inline BenchmarkValue mixed_benchmark(double s, double eta) {
  detail::check_squeezing(s);
  detail::check_noise(eta);
  const double v = 1.0 / std::sqrt((1.0 + 0.5 * eta + 1.0 / s) * (1.0 + 0.5 * eta + s));
  return {v, BenchmarkKind::mixed_overlap, s, eta, 0.0, false};
}

/// Upper bound on the Uhlmann-fidelity benchmark; independent of the noise.
inline BenchmarkValue uhlmann_bound(double s, double eta = 0.0) {
  detail::check_squeezing(s);
  return {std::sqrt(s) / (1.0 + s), BenchmarkKind::uhlmann_bound, s, eta, 0.0, false};
}

/// Overlap reached by the identity channel on the noisy ensemble.
inline BenchmarkValue ideal_overlap(double s, double eta) {
  detail::check_squeezing(s);
  detail::check_noise(eta);
  if (eta == 0.0) return {1.0, BenchmarkKind::ideal_overlap, s, eta, 0.0, true};
  const double v = 1.0 / std::sqrt((0.5 * eta + 1.0 / s) * (0.5 * eta + s));
  return {std::min(v, 1.0), BenchmarkKind::ideal_overlap, s, eta, 0.0, false};
}

/// Coherent states with prior q(xi) = alpha/pi exp(-alpha |xi|^2).
inline BenchmarkValue coherent_gaussian_benchmark(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw domain_error("alpha must be non-negative");
  return {(2.0 * alpha + 1.0) / (2.0 * (alpha + 1.0)), BenchmarkKind::coherent_gaussian, 1.0, 0.0, alpha,
          false};
}

}  // namespace sqbench
