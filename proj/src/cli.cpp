#include "shapemix/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "shapemix/basis.hpp"
#include "shapemix/cubic_newton.hpp"
#include "shapemix/io.hpp"
#include "shapemix/kw.hpp"
#include "shapemix/objective.hpp"
#include "shapemix/polytope.hpp"
#include "shapemix/reference.hpp"
#include "shapemix/rng.hpp"
#include "shapemix/synth.hpp"

namespace shapemix::cli {

namespace {

struct Options {
  std::string input, output, weights_path, trace_path, samples_path;
  std::string basis = "bernstein";
  int M = 100;
  double sigma = 0.0;
  std::string constraint = "none";
  int unimodal_mode = 0;
  double gap_tol = 1e-6;
  double outer_tol = 1e-10;
  int max_outer = 500;
  double L0 = 2.1213203435596424;
  double beta = 1.5;
  std::uint64_t seed = 0;
  int grid = 1001;
  int column = 0;
  bool normalize = false;
  std::string reference_f;
  // synth
  std::string profile = "gauss5";
  long long n_samples = 1000;
  // bench-oracle
  std::string family = "simplex";
  int trials = 100;
};

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.gap_tol = o.gap_tol;
  cfg.outer_tol = o.outer_tol;
  cfg.max_outer = o.max_outer;
  cfg.L0 = o.L0;
  cfg.beta = o.beta;
  return cfg;
}

struct NamedFamily {
  const char* name;
  Family family;
};

constexpr NamedFamily kFamilies[] = {
    {"none", Family::Simplex},
    {"simplex", Family::Simplex},
    {"decreasing", Family::Decreasing},
    {"increasing", Family::Increasing},
    {"concave", Family::Concave},
    {"convex", Family::Convex},
    {"concave-increasing", Family::ConcaveIncreasing},
    {"concave-decreasing", Family::ConcaveDecreasing},
    {"convex-increasing", Family::ConvexIncreasing},
    {"convex-decreasing", Family::ConvexDecreasing},
};

Family family_from_name(const std::string& name) {
  for (const auto& f : kFamilies)
    if (name == f.name) return f.family;
  throw CLI::ValidationError("--constraint", "unknown constraint: " + name);
}

// Builds the problem from samples and basis flags.
MixtureProblem build_problem(const Options& o, const Vec& samples) {
  if (o.basis == "bernstein") return bernstein_matrix(samples, o.M);
  if (o.basis == "gaussian") {
    if (!(o.sigma > 0.0))
      throw CLI::ValidationError("--sigma",
                                 "gaussian basis requires --sigma > 0");
    return gaussian_location_matrix(samples, uniform_location_grid(samples, o.M),
                                    o.sigma);
  }
  throw CLI::ValidationError("--basis", "unknown basis: " + o.basis);
}

int cmd_synth(const Options& o) {
  const SynthProfile profile = synth_profile_from_name(o.profile);
  const Vec samples = synth_samples(profile, o.n_samples, o.seed);
  write_samples(o.output, samples);
  return 0;
}

int cmd_fit(const Options& o) {
  const Vec samples = read_samples(o.input, o.column, o.normalize);
  const MixtureProblem problem = build_problem(o, samples);
  const SolverConfig cfg = solver_config(o);

  MinimizeResult result;
  if (o.constraint == "unimodal") {
    UnimodalFit fit = fit_unimodal(problem, cfg);
    std::cerr << "unimodal mode search: k_star=" << fit.k_star << "\n";
    result = std::move(fit.best);
  } else if (o.constraint == "unimodal-fixed") {
    result = minimize(
        problem, ShapeConstraint::unimodal_fixed(problem.M, o.unimodal_mode),
        cfg);
  } else {
    result = minimize(
        problem, ShapeConstraint::make(family_from_name(o.constraint), problem.M),
        cfg);
  }

  write_weights(o.output, result.w);
  const std::string trace_path =
      o.trace_path.empty() ? o.output + ".trace.csv" : o.trace_path;
  write_trace(trace_path, result.trace);

  std::cout << status_name(result.trace.status) << ' '
            << format_double(result.f) << ' ' << format_double(result.fw_gap)
            << ' ' << result.outer_iters << '\n';
  if (!o.reference_f.empty()) {
    std::ifstream in(o.reference_f);
    double fstar = 0.0;
    if (!(in >> fstar))
      throw std::runtime_error("cannot read reference objective from " +
                               o.reference_f);
    const double rel =
        (result.f - fstar) / std::max(1.0, std::abs(fstar));
    std::cout << "relative_error " << format_double(rel) << '\n';
  }
  return result.trace.status == SolveStatus::IterationCapped ? 2 : 0;
}

int cmd_density(const Options& o) {
  const Vec w = read_weights(o.input);
  const int M = static_cast<int>(w.size());
  BasisSpec basis;
  double lo = 0.0, hi = 1.0;
  if (o.basis == "bernstein") {
    basis = BasisSpec::bernstein(M);
  } else if (o.basis == "gaussian") {
    if (o.samples_path.empty())
      throw std::runtime_error(
          "density: gaussian basis needs --samples to rebuild the location "
          "grid");
    if (!(o.sigma > 0.0))
      throw std::runtime_error("density: gaussian basis needs --sigma > 0");
    const Vec samples = read_samples(o.samples_path, o.column, o.normalize);
    basis = BasisSpec::gaussian_location(uniform_location_grid(samples, M),
                                         o.sigma);
    lo = basis.locations.front();
    hi = basis.locations.back();
  } else {
    throw std::runtime_error("density: unknown basis " + o.basis);
  }
  Vec grid(o.grid);
  for (int i = 0; i < o.grid; ++i)
    grid[i] = o.grid == 1 ? 0.5 * (lo + hi)
                          : lo + (hi - lo) * static_cast<double>(i) / (o.grid - 1);
  const Vec density = density_eval(basis, w, grid);
  write_density(o.output, grid, density);
  return 0;
}

int cmd_kw_cert(const Options& o) {
  const Vec samples = read_samples(o.input, o.column, o.normalize);
  const Vec w = read_weights(o.weights_path);
  const Vec atoms = uniform_location_grid(samples, static_cast<int>(w.size()));
  const MixtureProblem problem = gaussian_location_matrix(samples, atoms, 1.0);
  const KWCertificate cert = kw_certificate(problem, w);
  write_kw_certificate(o.output, cert);
  return 0;
}

int cmd_bench_oracle(const Options& o) {
  ShapeConstraint cons =
      o.family == "unimodal-fixed"
          ? ShapeConstraint::unimodal_fixed(o.M, o.unimodal_mode > 0
                                                     ? o.unimodal_mode
                                                     : (o.M + 1) / 2)
          : ShapeConstraint::make(family_from_name(o.family), o.M);

  CounterRng rng(o.seed);
  double max_disc = 0.0;
  long long ops_small = 0;
  const bool verify = o.M <= 64;
  std::vector<Vec> catalog;
  if (verify) catalog = enumerate_vertices(cons);
  for (int t = 0; t < o.trials; ++t) {
    Vec g(o.M);
    for (double& x : g) x = rng.next_normal();
    const OracleResult r = lp_oracle(cons, g, &ops_small);
    if (verify) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& v : catalog) {
        double acc = 0.0;
        for (int i = 0; i < o.M; ++i) acc += v[i] * g[i];
        best = std::min(best, acc);
      }
      max_disc = std::max(max_disc, std::abs(best - r.value));
    }
  }

  // op-count scaling against a 10x larger instance of the same family
  const int M10 = o.M * 10;
  ShapeConstraint big =
      cons.family == Family::UnimodalFixed
          ? ShapeConstraint::unimodal_fixed(M10, (M10 + 1) / 2)
          : ShapeConstraint::make(cons.family, M10);
  long long ops_big = 0;
  {
    Vec g(M10);
    for (double& x : g) x = rng.next_normal();
    lp_oracle(big, g, &ops_big);
  }
  const double per_call_small =
      static_cast<double>(ops_small) / std::max(1, o.trials);
  const double ratio = ops_big / per_call_small;

  std::cout << "family=" << family_name(cons.family) << " M=" << o.M
            << " trials=" << o.trials;
  if (verify)
    std::cout << " max_discrepancy=" << format_double(max_disc);
  else
    std::cout << " max_discrepancy=skipped(M>64)";
  std::cout << " ops_per_call=" << format_double(per_call_small)
            << " ops_at_10x=" << ops_big << " scaling_ratio="
            << format_double(ratio);
  if (cons.family == Family::UnimodalFixed) {
    const double expected =
        static_cast<double>(cons.mode) * (cons.dim - cons.mode + 1);
    std::cout << " expected_window_count=" << format_double(expected);
  } else {
    std::cout << (ratio <= 10.5 ? " linear=yes" : " linear=no");
  }
  std::cout << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"shapemix: shape-constrained mixture proportion estimation"};
  app.require_subcommand(1);
  Options o;

  auto add_basis_flags = [&](CLI::App* c) {
    c->add_option("--basis", o.basis, "bernstein|gaussian");
    c->add_option("--M", o.M, "number of basis components");
    c->add_option("--sigma", o.sigma, "gaussian basis bandwidth");
  };
  auto add_io_flags = [&](CLI::App* c) {
    c->add_option("--input", o.input)->required();
    c->add_option("--output", o.output)->required();
    c->add_option("--column", o.column,
                  "1-based CSV column to read from --input");
    c->add_flag("--normalize", o.normalize, "min-max normalize to [0,1]");
  };

  CLI::App* synth = app.add_subcommand("synth", "generate synthetic samples");
  synth->add_option("--profile", o.profile,
                    "gauss5|beta_concave|beta_convex_increasing|halfnormal");
  synth->add_option("--N", o.n_samples)->required();
  synth->add_option("--seed", o.seed);
  synth->add_option("--output", o.output)->required();

  CLI::App* fit = app.add_subcommand("fit", "fit mixture proportions");
  add_io_flags(fit);
  add_basis_flags(fit);
  fit->add_option("--constraint", o.constraint,
                  "none|decreasing|increasing|concave|convex|"
                  "concave-increasing|concave-decreasing|convex-increasing|"
                  "convex-decreasing|unimodal|unimodal-fixed");
  fit->add_option("--unimodal-mode", o.unimodal_mode,
                  "mode index K for --constraint unimodal-fixed");
  fit->add_option("--gap-tol", o.gap_tol);
  fit->add_option("--outer-tol", o.outer_tol);
  fit->add_option("--max-outer", o.max_outer);
  fit->add_option("--L0", o.L0);
  fit->add_option("--beta", o.beta);
  fit->add_option("--seed", o.seed);
  fit->add_option("--trace", o.trace_path,
                  "trace csv path (default: <output>.trace.csv)");
  fit->add_option("--reference-f", o.reference_f,
                  "file holding a reference objective; prints relative error");

  CLI::App* density = app.add_subcommand("density", "evaluate a fitted density");
  density->add_option("--input", o.input, "weights file")->required();
  density->add_option("--output", o.output)->required();
  add_basis_flags(density);
  density->add_option("--grid", o.grid, "grid size (default 1001)");
  density->add_option("--samples", o.samples_path,
                      "samples file (gaussian basis: rebuilds the location grid)");
  density->add_option("--column", o.column);
  density->add_flag("--normalize", o.normalize);

  CLI::App* kw = app.add_subcommand("kw-cert", "Kiefer-Wolfowitz certificate");
  kw->add_option("--input", o.input, "samples file")->required();
  kw->add_option("--weights", o.weights_path)->required();
  kw->add_option("--output", o.output)->required();
  kw->add_option("--column", o.column);
  kw->add_flag("--normalize", o.normalize);

  CLI::App* bench = app.add_subcommand("bench-oracle", "LP oracle battery");
  bench->add_option("--family", o.family);
  bench->add_option("--M", o.M);
  bench->add_option("--trials", o.trials);
  bench->add_option("--seed", o.seed);
  bench->add_option("--unimodal-mode", o.unimodal_mode);

  std::vector<const char*> argv;
  argv.push_back("shapemix");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }

  try {
    if (synth->parsed()) return cmd_synth(o);
    if (fit->parsed()) return cmd_fit(o);
    if (density->parsed()) return cmd_density(o);
    if (kw->parsed()) return cmd_kw_cert(o);
    if (bench->parsed()) return cmd_bench_oracle(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace shapemix::cli
