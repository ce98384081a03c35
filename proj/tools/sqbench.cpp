// sqbench command-line front end.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sqbench/sqbench.hpp"

namespace fs = std::filesystem;
using namespace sqbench;

namespace {

constexpr int kExitIntegrity = 1;
constexpr int kExitUsage = 2;

int default_threads() {
  if (const char* env = std::getenv("SQBENCH_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

/// Runs jobs[i] for every i on up to `threads` workers; results keep the
/// input order.
template <class Job>
auto run_parallel(const std::vector<Job>& jobs, int threads) {
  using R = decltype(jobs[0]());
  std::vector<R> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      try {
        results[i] = jobs[i]();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, int(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

// ---------------------------------------------------------------------------

struct AnalyticArgs {
  double squeezing = 1.0;
  double noise = 0.0;
  std::string format = "json";
};

int run_analytic(const AnalyticArgs& a) {
  const auto pure = pure_benchmark(a.squeezing);
  const auto mixed = mixed_benchmark(a.squeezing, a.noise);
  const auto uhl = uhlmann_bound(a.squeezing, a.noise);
  const auto ideal = ideal_overlap(a.squeezing, a.noise);
  if (a.format == "csv") {
    std::ostringstream os;
    os << "squeezing,noise,pure_benchmark,mixed_benchmark,uhlmann_bound,ideal_overlap,ideal_capped\n"
       << io::format_double(a.squeezing) << ',' << io::format_double(a.noise) << ',' << io::format_double(pure.value)
       << ',' << io::format_double(mixed.value) << ',' << io::format_double(uhl.value) << ','
       << io::format_double(ideal.value) << ',' << (ideal.capped ? "true" : "false") << '\n';
    write_output("", os.str());
    return 0;
  }
  const io::json j = {{"squeezing", a.squeezing},
                      {"noise", a.noise},
                      {"pure_benchmark", pure.value},
                      {"mixed_benchmark", mixed.value},
                      {"uhlmann_bound", uhl.value},
                      {"ideal_overlap", ideal.value},
                      {"ideal_capped", ideal.capped}};
  write_output("", j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct BenchmarkArgs {
  double squeezing = 1.0;
  double transmissivity = 1.0;
  double alpha = 0.0;
  bool delta = false;
  int cutoff = 10;
  int samples = 8192;
  double tol = 1e-7;
  std::string format = "json";
  std::string out;
  int threads = 1;
  bool reproducible = false;
  bool qmc_doubling = false;
  std::string backend = "ipm";
  std::string save_eta;
  std::string load_eta;
  std::string dump_sdp;
};

PipelineOptions pipeline_options(double tol, const std::string& backend, bool doubling) {
  PipelineOptions opt;
  opt.sdp.tol = tol;
  opt.sdp.backend = backend == "admm" ? SdpBackend::admm : SdpBackend::interior_point;
  opt.qmc_doubling = doubling;
  return opt;
}

int run_benchmark(const BenchmarkArgs& a) {
  const PipelineOptions opt = pipeline_options(a.tol, a.backend, a.qmc_doubling);
  EnsembleSpec spec;
  EtaBlocks eta;
  double eta_ms = 0.0;
  if (!a.load_eta.empty()) {
    io::EtaFile file = io::load_eta(a.load_eta);
    spec = file.spec;
    eta = std::move(file.eta);
  } else {
    spec.squeezing = a.squeezing;
    spec.transmissivity = a.transmissivity;
    if (a.delta)
      spec.prior = DeltaAtOrigin{};
    else
      spec.prior = GaussianIsotropic{a.alpha};
    spec.cutoff = a.cutoff;
    spec.samples = a.samples;
    spec.threads = a.threads;
    const auto t0 = std::chrono::steady_clock::now();
    eta = build_eta(spec);
    eta_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  if (!a.save_eta.empty()) io::save_eta(a.save_eta, spec, eta);

  BenchmarkReport report = benchmark_from_eta(spec, eta, opt);
  report.timings.eta_ms = eta_ms;
  report.timings.total_ms = eta_ms + report.timings.solve_ms;
  if (a.qmc_doubling && a.load_eta.empty() && std::holds_alternative<GaussianIsotropic>(spec.prior)) {
    EnsembleSpec twice = spec;
    twice.samples *= 2;
    PipelineOptions inner = opt;
    inner.qmc_doubling = false;
    report.qmc_doubling_delta = benchmark_pipeline(twice, inner).f_infinite - report.f_infinite;
  }
  if (!a.dump_sdp.empty()) {
    const BlockSdp problem = assemble_problem(eta);
    write_output(a.dump_sdp, io::sdp_dump(problem, solve(problem, opt.sdp)).dump(2) + "\n");
  }
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';

  if (a.format == "csv")
    write_output(a.out, io::report_csv_header() + "\n" + io::report_csv_row(report) + "\n");
  else
    write_output(a.out, io::report_to_json(report, !a.reproducible).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct FigureArgs {
  int figure = 1;
  std::string out = ".";
  int cutoff = -1;
  int samples = 8192;
  double tol = 1e-7;
  int threads = 1;
  std::string backend = "ipm";
};

const std::vector<double> kAlphaGrid = {0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0};

std::vector<BenchmarkReport> run_specs(const std::vector<EnsembleSpec>& specs, const FigureArgs& a) {
  const PipelineOptions opt = pipeline_options(a.tol, a.backend, false);
  std::vector<std::function<BenchmarkReport()>> jobs;
  for (const auto& s : specs) jobs.emplace_back([s, opt] { return benchmark_pipeline(s, opt); });
  return run_parallel(jobs, a.threads);
}

int run_figure(const FigureArgs& a) {
  fs::create_directories(a.out);
  const fs::path path = fs::path(a.out) / ("figure" + std::to_string(a.figure) + ".csv");
  std::ostringstream os;
  if (a.figure == 1) {
    os << "squeezing,noise,mixed_benchmark,uhlmann_bound,ideal_overlap\n";
    for (double eta : {0.0, 0.5, 1.0})
      for (int i = 0; i <= 36; ++i) {
        const double s = 1.0 + 0.25 * i;
        os << io::format_double(s) << ',' << io::format_double(eta) << ','
           << io::format_double(mixed_benchmark(s, eta).value) << ',' << io::format_double(uhlmann_bound(s, eta).value)
           << ',' << io::format_double(ideal_overlap(s, eta).value) << '\n';
      }
  } else {
    const int cutoff = a.cutoff >= 0 ? a.cutoff : (a.figure == 2 ? 35 : 30);
    std::vector<EnsembleSpec> specs;
    auto add = [&](double s, double lambda, Prior prior) {
      EnsembleSpec e;
      e.squeezing = s;
      e.transmissivity = lambda;
      e.prior = std::move(prior);
      e.cutoff = cutoff;
      e.samples = a.samples;
      specs.push_back(std::move(e));
    };
    if (a.figure == 2) {
      for (double alpha : kAlphaGrid) add(1.0, 1.0, GaussianIsotropic{alpha});
    } else if (a.figure == 3) {
      for (double lambda : {1.0, 0.8, 0.6})
        for (double alpha : kAlphaGrid) add(8.0, lambda, GaussianIsotropic{alpha});
    } else {
      for (int s = 2; s <= 10; ++s) add(double(s), 1.0, DeltaAtOrigin{});
    }
    const auto reports = run_specs(specs, a);
    const char* extra = a.figure == 2 ? ",formula" : a.figure == 4 ? ",flat_displacement_benchmark" : "";
    os << io::report_csv_header() << extra << '\n';
    for (const auto& r : reports) {
      os << io::report_csv_row(r);
      if (a.figure == 2)
        os << ',' << io::format_double(coherent_gaussian_benchmark(std::get<GaussianIsotropic>(r.spec.prior).alpha).value);
      if (a.figure == 4) os << ',' << io::format_double(pure_benchmark(r.spec.squeezing).value);
      os << '\n';
    }
  }
  write_output(path.string(), os.str());
  std::cerr << "wrote " << path.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct FockArgs {
  double squeezing = 1.0;
  double transmissivity = 1.0;
  std::vector<double> xi = {0.0, 0.0};
  double theta = 0.0;
  int cutoff = 10;
  std::string out;
};

int run_fock_table(const FockArgs& a) {
  if (a.xi.size() != 2) throw domain_error("--xi expects two comma-separated values");
  const GaussianState g =
      apply_attenuation(squeezed_state(a.squeezing, a.theta, Eigen::Vector2d(a.xi[0], a.xi[1])), a.transmissivity);
  const FockMatrix f = fock_matrix(g, a.cutoff);
  std::ostringstream os;
  os << "row,col,re,im\n";
  char buf[128];
  for (int r = 0; r < f.dim(); ++r)
    for (int c = 0; c < f.dim(); ++c) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", r, c, f(r, c).real(), f(r, c).imag());
      os << buf;
    }
  write_output(a.out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical benchmarks for squeezed-state teleportation and storage"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sqbench 1.0.0");

  AnalyticArgs an;
  auto* analytic = app.add_subcommand("analytic", "Closed-form benchmarks");
  analytic->add_option("--squeezing,-s", an.squeezing, "Squeezing s > 0")->required();
  analytic->add_option("--noise", an.noise, "Additive noise variance eta >= 0");
  analytic->add_option("--format", an.format)->check(CLI::IsMember({"json", "csv"}));

  BenchmarkArgs bm;
  bm.threads = default_threads();
  auto* bench = app.add_subcommand("benchmark", "Certified SDP benchmark for one ensemble");
  auto* sq = bench->add_option("--squeezing,-s", bm.squeezing, "Squeezing s > 0");
  auto* loss = bench->add_option("--loss,--transmissivity", bm.transmissivity, "Channel transmissivity lambda");
  auto* alpha = bench->add_option("--alpha", bm.alpha, "Gaussian prior width parameter");
  auto* delta = bench->add_flag("--delta", bm.delta, "Undisplaced, randomly rotated states");
  alpha->excludes(delta);
  auto* cutoff = bench->add_option("--cutoff,-c", bm.cutoff, "Photon-number cutoff");
  auto* samples = bench->add_option("--samples,-n", bm.samples, "Halton samples");
  bench->add_option("--tol", bm.tol, "Solver tolerance");
  bench->add_option("--format", bm.format)->check(CLI::IsMember({"json", "csv"}));
  bench->add_option("--out,-o", bm.out, "Output file (default stdout)");
  bench->add_option("--threads", bm.threads)->check(CLI::PositiveNumber);
  bench->add_flag("--reproducible", bm.reproducible, "Omit timings so reruns are byte-identical");
  bench->add_flag("--qmc-doubling", bm.qmc_doubling, "Also report f_infinite(2N) - f_infinite(N)");
  bench->add_option("--backend", bm.backend)->check(CLI::IsMember({"ipm", "admm"}));
  bench->add_option("--save-eta", bm.save_eta, "Cache the ensemble operator");
  auto* load = bench->add_option("--load-eta", bm.load_eta, "Solve a cached ensemble operator");
  bench->add_option("--dump-sdp", bm.dump_sdp, "Write the SDP structure and iteration trace as JSON");
  for (auto* o : {sq, loss, alpha, cutoff, samples}) load->excludes(o);
  load->excludes(delta);

  FigureArgs fg;
  fg.threads = default_threads();
  auto* figure = app.add_subcommand("figure", "Figure data as CSV");
  figure->add_option("number", fg.figure, "Figure 1-4")->required()->check(CLI::Range(1, 4));
  figure->add_option("--out,-o", fg.out, "Output directory")->required();
  figure->add_option("--cutoff,-c", fg.cutoff, "Override the default cutoff")->check(CLI::NonNegativeNumber);
  figure->add_option("--samples,-n", fg.samples)->check(CLI::PositiveNumber);
  figure->add_option("--tol", fg.tol);
  figure->add_option("--threads", fg.threads)->check(CLI::PositiveNumber);
  figure->add_option("--backend", fg.backend)->check(CLI::IsMember({"ipm", "admm"}));
  bool fig_reproducible = false;
  figure->add_flag("--reproducible", fig_reproducible, "Accepted for symmetry; figure output has no timings");

  FockArgs fk;
  auto* fock = app.add_subcommand("fock-table", "Fock matrix of a Gaussian state as CSV");
  fock->add_option("--squeezing,-s", fk.squeezing)->required();
  fock->add_option("--loss,--transmissivity", fk.transmissivity);
  fock->add_option("--xi", fk.xi, "First moments X,P")->delimiter(',')->expected(2);
  fock->add_option("--theta", fk.theta, "Squeezing axis angle");
  fock->add_option("--cutoff,-c", fk.cutoff)->required();
  fock->add_option("--out,-o", fk.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*analytic) return run_analytic(an);
    if (*bench) {
      if (bm.load_eta.empty()) {
        if (!*sq) throw domain_error("benchmark: --squeezing is required");
        if (!*alpha && !bm.delta) throw domain_error("benchmark: one of --alpha or --delta is required");
      }
      return run_benchmark(bm);
    }
    if (*figure) return run_figure(fg);
    if (*fock) return run_fock_table(fk);
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIntegrity;
  }
  return kExitUsage;
}
