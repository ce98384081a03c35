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

// JSON and binary serialization: benchmark reports (schema 1), CSV rows,
// SDP dumps and cached eta files.
//
// Eta file layout: one line of JSON header terminated by '\n', followed by
// every block in order j = 0..c as row-major (re, im) little-endian doubles.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "sqbench/bench.hpp"
#include "sqbench/ensemble.hpp"
#include "sqbench/errors.hpp"
#include "sqbench/sdp.hpp"

namespace sqbench::io {

using json = nlohmann::json;

inline constexpr int kReportSchema = 1;
inline constexpr int kEtaFormatVersion = 1;
inline constexpr const char* kEtaMagic = "sqbench-eta";

namespace detail {

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline std::uint64_t fnv1a(const char* data, std::size_t n) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

inline json prior_to_json(const Prior& prior) {
  if (const auto* g = std::get_if<GaussianIsotropic>(&prior)) return {{"kind", "gaussian"}, {"alpha", g->alpha}};
  if (std::holds_alternative<DeltaAtOrigin>(prior)) return {{"kind", "delta"}};
  json pts = json::array();
  for (const auto& s : std::get<ExplicitSamples>(prior).samples) pts.push_back({s.xi(0), s.xi(1), s.weight});
  return {{"kind", "explicit"}, {"samples", pts}};
}

inline Prior prior_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") return GaussianIsotropic{j.at("alpha").get<double>()};
  if (kind == "delta") return DeltaAtOrigin{};
  if (kind == "explicit") {
    ExplicitSamples e;
    for (const auto& p : j.at("samples"))
      e.samples.push_back({Eigen::Vector2d(p.at(0).get<double>(), p.at(1).get<double>()), p.at(2).get<double>()});
    return e;
  }
  throw integrity_error("unknown prior kind '" + kind + "'");
}

inline json spec_to_json(const EnsembleSpec& s) {
  return {{"squeezing", s.squeezing}, {"transmissivity", s.transmissivity}, {"prior", prior_to_json(s.prior)},
          {"cutoff", s.cutoff},       {"samples", s.samples},               {"mirror_symmetrize", s.mirror_symmetrize}};
}

inline EnsembleSpec spec_from_json(const json& j) {
  EnsembleSpec s;
  s.squeezing = j.at("squeezing").get<double>();
  s.transmissivity = j.at("transmissivity").get<double>();
  s.prior = prior_from_json(j.at("prior"));
  s.cutoff = j.at("cutoff").get<int>();
  s.samples = j.at("samples").get<int>();
  s.mirror_symmetrize = j.value("mirror_symmetrize", true);
  return s;
}

/// Timings are dropped when include_timings is false so that repeated runs
/// serialize identically.
inline json report_to_json(const BenchmarkReport& r, bool include_timings = true) {
  json j = {{"schema", kReportSchema},
            {"spec", spec_to_json(r.spec)},
            {"f_finite", r.f_finite},
            {"eps_error", r.eps_error},
            {"f_infinite", r.f_infinite},
            {"certified", r.certified},
            {"primal", r.primal},
            {"gap", r.gap},
            {"trace_captured", r.trace_captured},
            {"samples", r.samples},
            {"tol", r.tol},
            {"iterations", r.iterations},
            {"status", std::string(to_string(r.status))},
            {"qmc_doubling_delta", r.qmc_doubling_delta ? json(*r.qmc_doubling_delta) : json(nullptr)},
            {"warnings", r.warnings}};
  if (include_timings) {
    j["wall_ms"] = r.timings.total_ms;
    j["timings"] = {{"eta_ms", r.timings.eta_ms}, {"solve_ms", r.timings.solve_ms}, {"total_ms", r.timings.total_ms}};
  } else {
    j["wall_ms"] = nullptr;
  }
  return j;
}

inline std::string report_csv_header() {
  return "squeezing,transmissivity,prior,alpha,cutoff,samples,f_finite,eps_error,f_infinite,gap,trace_captured,"
         "status";
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string report_csv_row(const BenchmarkReport& r) {
  const auto* g = std::get_if<GaussianIsotropic>(&r.spec.prior);
  const char* prior = g ? "gaussian" : std::holds_alternative<DeltaAtOrigin>(r.spec.prior) ? "delta" : "explicit";
  std::ostringstream os;
  os << format_double(r.spec.squeezing) << ',' << format_double(r.spec.transmissivity) << ',' << prior << ','
     << (g ? format_double(g->alpha) : std::string()) << ',' << r.spec.cutoff << ',' << r.samples << ','
     << format_double(r.f_finite) << ',' << format_double(r.eps_error) << ',' << format_double(r.f_infinite) << ','
     << format_double(r.gap) << ',' << format_double(r.trace_captured) << ',' << to_string(r.status);
  return os.str();
}

// ---------------------------------------------------------------------------

inline json sdp_dump(const BlockSdp& p, const SdpSolution& sol) {
  json sum_dims = json::array(), diff_dims = json::array(), norms = json::array();
  for (int j = 0; j < p.num_sum_sectors(); ++j) {
    sum_dims.push_back(p.sum_dim(j));
    norms.push_back(p.objective[j].norm());
  }
  for (int i = 0; i < p.num_diff_sectors(); ++i) diff_dims.push_back(p.diff_dim(i));
  json trace = json::array();
  for (const auto& it : sol.trace)
    trace.push_back({{"iteration", it.iteration},
                     {"omega_objective", detail::number_or_null(it.dual_objective)},
                     {"certificate_objective", detail::number_or_null(it.primal_objective)},
                     {"relative_gap", detail::number_or_null(it.relative_gap)},
                     {"omega_infeasibility", detail::number_or_null(it.dual_infeasibility)},
                     {"certificate_infeasibility", detail::number_or_null(it.primal_infeasibility)},
                     {"mu", detail::number_or_null(it.mu)}});
  json rows = json::array();
  for (Eigen::Index k = 0; k < sol.dual_row_multipliers.size(); ++k) rows.push_back(sol.dual_row_multipliers(k));
  return {{"cutoff", p.cutoff},
          {"real_objective", p.real_objective},
          {"sum_sector_dims", sum_dims},
          {"difference_sector_dims", diff_dims},
          {"row_constraints", p.num_row_constraints()},
          {"objective_frobenius_norms", norms},
          {"backend", std::string(to_string(sol.backend))},
          {"real_arithmetic", sol.real_arithmetic},
          {"status", std::string(to_string(sol.status))},
          {"iterations", sol.iterations},
          {"primal_value", sol.primal_value},
          {"dual_value", sol.dual_value},
          {"gap", sol.gap},
          {"primal_shift", sol.primal_shift},
          {"primal_scale", sol.primal_scale},
          {"dual_shift", sol.dual_shift},
          {"row_multipliers", rows},
          {"trace", trace}};
}

// ---------------------------------------------------------------------------

struct EtaFile {
  EnsembleSpec spec;
  EtaBlocks eta;
};

inline void save_eta(const std::string& path, const EnsembleSpec& spec, const EtaBlocks& eta) {
  static_assert(std::endian::native == std::endian::little, "eta files are little-endian");
  std::string payload;
  json dims = json::array();
  for (const auto& b : eta.blocks) {
    dims.push_back(b.rows());
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index c = 0; c < b.cols(); ++c) {
        const double v[2] = {b(r, c).real(), b(r, c).imag()};
        payload.append(reinterpret_cast<const char*>(v), sizeof v);
      }
  }
  const json header = {{"format", kEtaMagic},
                       {"version", kEtaFormatVersion},
                       {"spec", spec_to_json(spec)},
                       {"cutoff", eta.cutoff},
                       {"trace_captured", eta.trace_captured},
                       {"hermiticity_residual", eta.hermiticity_residual},
                       {"block_dims", dims},
                       {"payload_bytes", payload.size()},
                       {"checksum", detail::fnv1a(payload.data(), payload.size())}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_eta: cannot open '" + path + "'");
  out << header.dump() << '\n';
  out.write(payload.data(), std::streamsize(payload.size()));
  if (!out) throw std::runtime_error("save_eta: write failed for '" + path + "'");
}

inline EtaFile load_eta(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_eta: cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw integrity_error(std::string("load_eta: bad header: ") + e.what());
  }
  if (header.value("format", "") != kEtaMagic) throw integrity_error("load_eta: not an eta file");
  if (header.value("version", 0) != kEtaFormatVersion)
    throw integrity_error("load_eta: unsupported version " + header.value("version", json()).dump());
  EtaFile f;
  f.spec = spec_from_json(header.at("spec"));
  f.eta.cutoff = header.at("cutoff").get<int>();
  f.eta.trace_captured = header.at("trace_captured").get<double>();
  f.eta.hermiticity_residual = header.value("hermiticity_residual", 0.0);
  const auto dims = header.at("block_dims").get<std::vector<int>>();
  if (int(dims.size()) != f.eta.cutoff + 1 || f.spec.cutoff != f.eta.cutoff)
    throw integrity_error("load_eta: block count does not match the cutoff");
  const auto bytes = header.at("payload_bytes").get<std::size_t>();
  std::string payload(bytes, '\0');
  in.read(payload.data(), std::streamsize(bytes));
  if (std::size_t(in.gcount()) != bytes) throw integrity_error("load_eta: truncated payload");
  if (in.peek() != std::char_traits<char>::eof()) throw integrity_error("load_eta: trailing bytes after payload");
  if (detail::fnv1a(payload.data(), payload.size()) != header.at("checksum").get<std::uint64_t>())
    throw integrity_error("load_eta: checksum mismatch");
  std::size_t pos = 0;
  for (int j = 0; j <= f.eta.cutoff; ++j) {
    if (dims[j] != j + 1) throw integrity_error("load_eta: block " + std::to_string(j) + " has wrong dimension");
    Eigen::MatrixXcd b(dims[j], dims[j]);
    for (int r = 0; r < dims[j]; ++r)
      for (int c = 0; c < dims[j]; ++c) {
        if (pos + 2 * sizeof(double) > payload.size()) throw integrity_error("load_eta: payload too short");
        double v[2];
        std::memcpy(v, payload.data() + pos, sizeof v);
        pos += sizeof v;
        b(r, c) = cplx(v[0], v[1]);
      }
    f.eta.blocks.push_back(std::move(b));
  }
  if (pos != payload.size()) throw integrity_error("load_eta: payload size does not match block dims");
  return f;
}

}  // namespace sqbench::io
