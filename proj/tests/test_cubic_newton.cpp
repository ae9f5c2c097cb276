#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "shapemix/cubic_newton.hpp"
#include "shapemix/objective.hpp"
#include "shapemix/reference.hpp"
#include "shapemix/synth.hpp"
#include "test_util.hpp"

using namespace shapemix;

namespace {

MixtureProblem columns(std::vector<Vec> cols) {
  MixtureProblem p;
  p.M = static_cast<int>(cols[0].size());
  p.N = static_cast<std::int64_t>(cols.size());
  p.basis = BasisSpec::bernstein(p.M);
  p.samples.assign(p.N, 0.5);
  for (const Vec& c : cols) p.B.insert(p.B.end(), c.begin(), c.end());
  return p;
}

bool vector_is_unimodal(const Vec& w, int* mode, double tol = 1e-9) {
  const int M = static_cast<int>(w.size());
  int k = 0;
  while (k + 1 < M && w[k + 1] >= w[k] - tol) ++k;
  for (int i = k; i + 1 < M; ++i)
    if (w[i + 1] > w[i] + tol) return false;
  if (mode) *mode = k + 1;
  return true;
}

double check_trace(const MinimizeResult& r, std::int64_t N, double L0) {
  // descent within 1e-14 and the L_k bound, across the whole trace
  const double bound = std::max(48.0 * static_cast<double>(N), L0);
  double prev = std::numeric_limits<double>::infinity();
  for (const TraceRow& row : r.trace.rows) {
    CHECK(row.f <= prev + 1e-14 * std::max(1.0, std::abs(prev)));
    CHECK(row.L <= bound);
    prev = row.f;
  }
  return prev;
}

}  // namespace

TEST_CASE("M = 1 returns immediately") {
  auto p = columns({{2.0}, {3.0}});
  auto r = minimize(p, ShapeConstraint::simplex(1), SolverConfig{});
  CHECK(r.w == Vec{1.0});
  CHECK(r.outer_iters == 0);
  CHECK(r.fw_gap == 0.0);
}

TEST_CASE("symmetric instance converges to the uniform weights") {
  auto p = columns({{2, 0}, {0, 2}});
  auto r = minimize(p, ShapeConstraint::simplex(2), SolverConfig{});
  CHECK(std::abs(r.w[0] - 0.5) <= 1e-8);
  CHECK(std::abs(r.w[1] - 0.5) <= 1e-8);
  CHECK(r.trace.status == SolveStatus::GapCertified);
  CHECK(r.outer_iters == 0);  // uniform start is already optimal
}

TEST_CASE("acceptance test on the worked examples") {
  auto p = testutil::random_instance(5, 40, 808);
  CounterRng rng(808);
  const Vec w = testutil::random_interior_weights(5, rng);
  CHECK(acceptance_test(p, w, w, 1.0, 0.0));       // y = w
  CHECK(acceptance_test(p, w, w, 1.0, 1e9));       // huge gamma
  const Vec y = testutil::random_interior_weights(5, rng);
  CHECK(acceptance_test(p, w, y, 1.0, 1e9));
}

TEST_CASE("acceptance holds at L = 48N given the subproblem guard") {
  CounterRng rng(909);
  for (int inst = 0; inst < 100; ++inst) {
    const int M = 2 + static_cast<int>(rng.next_u01() * 5);
    const std::int64_t N = 5 + static_cast<std::int64_t>(rng.next_u01() * 45);
    auto p = testutil::random_instance(M, N, 4000 + inst);
    const Vec w = testutil::random_interior_weights(M, rng);
    const double L = 48.0 * static_cast<double>(N);
    auto sub = solve_subproblem(p, w, L, ShapeConstraint::simplex(M),
                                ActiveSet{}, {1e-9, 2000});
    CHECK(acceptance_test(p, w, sub.y, L, 0.0));
  }
}

TEST_CASE("next iterate follows the shorter-step rule order") {
  auto p = columns({{2, 0}, {0, 2}});  // f((a,1-a)) = -log(4a(1-a))/2
  SolverConfig cfg;

  SUBCASE("shorter point kept when it satisfies both inequalities") {
    const Vec w{0.3, 0.7}, y{0.5, 0.5};
    const Vec next = next_iterate(w, y, 1, cfg, p);
    CHECK(next[0] == doctest::Approx(0.4).epsilon(1e-12));
  }
  SUBCASE("shorter point rejected by the rho inequality falls back to y") {
    SolverConfig tight = cfg;
    tight.rho_base = 0.0;  // rho_k = 0: shorter must beat f(y) outright
    const Vec w{0.3, 0.7}, y{0.5, 0.5};
    const Vec next = next_iterate(w, y, 1, tight, p);
    CHECK(next[0] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("ascent candidate leaves the iterate unchanged") {
    const Vec w{0.5, 0.5}, y{0.9, 0.1};
    const Vec next = next_iterate(w, y, 1, cfg, p);
    CHECK(next[0] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("past the shorter phase a descent y is taken directly") {
    const Vec w{0.3, 0.7}, y{0.5, 0.5};
    const Vec next = next_iterate(w, y, 11, cfg, p);
    CHECK(next[0] == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("solver agrees with the EM oracle and keeps its invariants") {
  auto samples = synth_samples(SynthProfile::Gauss5, 2000, 1234);
  auto grid = uniform_location_grid(samples, 25);
  auto p = gaussian_location_matrix(samples, grid, 0.5);

  SolverConfig cfg;
  auto r = minimize(p, ShapeConstraint::simplex(25), cfg);
  CHECK(r.trace.status == SolveStatus::GapCertified);
  CHECK(r.fw_gap <= cfg.gap_tol * std::max(1.0, std::abs(r.f)));
  check_trace(r, p.N, cfg.L0);

  auto em = em_solve(p, 1e-12, 200000);
  const double f_em = f_value(p, em.w);
  CHECK(std::abs(r.f - f_em) <= 1e-4 * std::max(1.0, std::abs(f_em)));
}

TEST_CASE("shape-constrained fits are feasible and certified") {
  auto samples = synth_samples(SynthProfile::Halfnormal, 3000, 77);
  auto p = bernstein_matrix(samples, 20);
  SolverConfig cfg;
  for (Family f : {Family::Decreasing, Family::Concave,
                   Family::ConvexDecreasing}) {
    const auto cons = ShapeConstraint::make(f, 20);
    auto r = minimize(p, cons, cfg);
    CHECK(membership(cons, r.w, 1e-9));
    CHECK(r.fw_gap <= cfg.gap_tol * std::max(1.0, std::abs(r.f)));
    check_trace(r, p.N, cfg.L0);
  }
}

TEST_CASE("local quadratic convergence diagnostic") {
  auto p = testutil::random_instance(10, 500, 5150);

  SolverConfig tight;
  tight.gap_tol = 1e-12;
  tight.max_outer = 300;
  auto ref = minimize(p, ShapeConstraint::simplex(10), tight);
  const Vec& wstar = ref.w;

  SolverConfig cfg;
  cfg.gap_tol = 1e-11;
  cfg.shorter_step_iters = 0;  // pure full steps expose the quadratic tail
  auto run = minimize(p, ShapeConstraint::simplex(10), cfg);

  // replay to collect iterates: rerun with increasing caps (cheap at M=10)
  std::vector<double> errs;
  for (int cap = 1; cap <= run.outer_iters; ++cap) {
    SolverConfig c = cfg;
    c.max_outer = cap;
    auto rr = minimize(p, ShapeConstraint::simplex(10), c);
    Vec d(10);
    for (int i = 0; i < 10; ++i) d[i] = rr.w[i] - wstar[i];
    errs.push_back(std::sqrt(hess_quadratic_form(p, wstar, d)));
  }
  // tail contraction: collect ratios e_{k+1}/e_k^2 where e_k is above noise
  double c_rec = 0.0;
  int used = 0;
  for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
    if (errs[k] < 1e-8 || errs[k] > 0.5) continue;
    CHECK(errs[k + 1] <= errs[k]);  // decreasing tail
    c_rec = std::max(c_rec, errs[k + 1] / (errs[k] * errs[k]));
    ++used;
  }
  INFO("recorded quadratic-rate constant c = ", c_rec, " over ", used,
       " tail iterations");
  CHECK(used >= 1);
  CHECK(std::isfinite(c_rec));
}

TEST_CASE("iteration cap reports without failing") {
  auto samples = synth_samples(SynthProfile::Halfnormal, 500, 3);
  auto p = bernstein_matrix(samples, 15);
  SolverConfig cfg;
  cfg.max_outer = 1;
  cfg.gap_tol = 1e-15;
  cfg.outer_tol = 0.0;
  auto r = minimize(p, ShapeConstraint::simplex(15), cfg);
  CHECK(r.trace.status == SolveStatus::IterationCapped);
  CHECK(r.outer_iters == 1);
}

TEST_CASE("invalid starts are rejected") {
  auto p = columns({{2, 0}, {0, 2}});
  SolverConfig cfg;
  CHECK_THROWS_AS(
      minimize(p, ShapeConstraint::make(Family::Decreasing, 2), cfg,
               Vec{0.2, 0.8}),
      std::invalid_argument);
  SolverConfig bad;
  bad.beta = 2.5;
  CHECK_THROWS_AS(minimize(p, ShapeConstraint::simplex(2), bad),
                  std::invalid_argument);
}

TEST_CASE("unimodal fit: argmin property and mode match") {
  auto samples = synth_samples(SynthProfile::BetaConcave, 4000, 42);
  auto p = bernstein_matrix(samples, 8);
  SolverConfig cfg;
  UnimodalFit fit = fit_unimodal(p, cfg);

  REQUIRE(static_cast<int>(fit.per_mode_f.size()) == 8);
  for (double fm : fit.per_mode_f) CHECK(fit.per_mode_f[fit.k_star - 1] <= fm + 1e-12);
  CHECK(fit.best.f == fit.per_mode_f[fit.k_star - 1]);
  CHECK(membership(ShapeConstraint::unimodal_fixed(8, fit.k_star), fit.w, 1e-9));

  // when the unconstrained optimum is already unimodal the search matches it
  auto un = minimize(p, ShapeConstraint::simplex(8), cfg);
  int mode = 0;
  if (vector_is_unimodal(un.w, &mode)) {
    CHECK(std::abs(fit.best.f - un.f) <=
          2.0 * cfg.gap_tol * std::max(1.0, std::abs(un.f)));
  }
}

TEST_CASE("unimodal fit with M = 1") {
  auto p = columns({{1.0}, {2.0}});
  UnimodalFit fit = fit_unimodal(p, SolverConfig{});
  CHECK(fit.k_star == 1);
  CHECK(fit.w == Vec{1.0});
}
