#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "shapemix/cubic_newton.hpp"
#include "shapemix/kw.hpp"
#include "shapemix/objective.hpp"
#include "shapemix/rng.hpp"
#include "test_util.hpp"

using namespace shapemix;

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

double phi(double t) { return std::exp(-0.5 * t * t) / kSqrt2Pi; }

// deterministic two-cluster sample set
Vec cluster_samples(int n, std::uint64_t seed) {
  CounterRng rng(seed);
  Vec xs(n);
  for (int i = 0; i < n; ++i)
    xs[i] = (i < n / 2 ? -2.0 : 2.0) + rng.next_normal();
  return xs;
}

}  // namespace

TEST_CASE("dual recovery from the primal on the N = 1 closed form") {
  auto p = gaussian_location_matrix({0.0}, {0.0}, 1.0);
  const Vec nu = dual_from_primal(p, {1.0});
  CHECK(nu[0] == doctest::Approx(kSqrt2Pi).epsilon(1e-12));
}

TEST_CASE("dual recovery rejects unsupported bases") {
  auto bern = bernstein_matrix({0.5}, 2);
  CHECK_THROWS_AS(dual_from_primal(bern, {0.5, 0.5}), std::invalid_argument);
  auto wide = gaussian_location_matrix({0.0}, {0.0}, 2.0);
  CHECK_THROWS_AS(dual_from_primal(wide, {1.0}), std::invalid_argument);
}

TEST_CASE("all-ones inner products give a unit dual") {
  // single atom at 0 with weight 1; samples all at 0 after scaling by phi(0)
  auto p = gaussian_location_matrix({0.0, 0.0, 0.0}, {0.0}, 1.0);
  const Vec nu = dual_from_primal(p, {1.0});
  for (double v : nu) CHECK(v == doctest::Approx(kSqrt2Pi).epsilon(1e-12));
}

TEST_CASE("dual feasibility margin") {
  // N = 1 closed form: margin exactly 0 on the grid {0}
  const Vec nu{kSqrt2Pi};
  CHECK(dual_feasibility_margin(nu, {0.0}, {0.0}) ==
        doctest::Approx(0.0).epsilon(1e-14));
  // zero dual -> margin -N
  CHECK(dual_feasibility_margin({0.0, 0.0}, {0.0, 1.0}, {0.0}) ==
        doctest::Approx(-2.0).epsilon(1e-14));
  // doubling an active dual overshoots by about N
  const Vec nu2{2.0 * kSqrt2Pi};
  CHECK(dual_feasibility_margin(nu2, {0.0}, {0.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gamma estimate") {
  SUBCASE("single bump closed form") {
    CHECK(gamma_estimate({kSqrt2Pi}, {0.0}) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("well-separated bumps dominate at N") {
    const Vec nu{2.0 * kSqrt2Pi, 2.0 * kSqrt2Pi};
    const Vec xs{0.0, 20.0};
    const double g = gamma_estimate(nu, xs);
    CHECK(std::abs(g - 2.0) <= 1e-14);
  }
  SUBCASE("certified upper bound against a randomized scan") {
    CounterRng rng(55);
    const Vec xs = cluster_samples(20, 7);
    Vec nu(20);
    for (double& v : nu) v = 0.5 + 2.0 * rng.next_u01();
    const double g = gamma_estimate(nu, xs);
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    for (int t = 0; t < 1000000; ++t) {
      const double mu = *lo + (*hi - *lo) * rng.next_u01();
      double s = 0.0;
      for (int i = 0; i < 20; ++i) s += nu[i] * phi(xs[i] - mu);
      CHECK(s <= g);
      if (s > g) break;
    }
  }
}

TEST_CASE("gap bounds") {
  const Vec nu(2, 1.0);
  {
    const auto [b17, b18] = gap_bounds(0.0, 2.0, 2, 0.5, nu);
    CHECK(b17 == 0.0);
    CHECK(b18 > 0.0);
  }
  {
    const auto [b17, b18] = gap_bounds(0.0, 2.0, 2, 0.0, nu);
    CHECK(b18 == 0.0);
  }
  {
    const auto [b17, b18] = gap_bounds(0.0, 2.0 * M_E, 2, 0.0, nu);
    CHECK(b17 == doctest::Approx(2.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(gap_bounds(0.0, 1.5, 2, 0.1, nu), std::invalid_argument);
  CHECK_THROWS_AS(gap_bounds(0.0, 2.0, 2, -0.1, nu), std::invalid_argument);
}

TEST_CASE("rho and its inverse") {
  CHECK(rho(0.0) == 0.0);
  CHECK(rho_inv(0.0) == 0.0);
  CHECK(rho(1.0) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-15));
  CHECK(rho_inv(1.0 - std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(rho(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(rho_inv(-0.1), std::invalid_argument);

  CounterRng rng(66);
  double prev = -1.0;
  for (int t = 0; t < 100; ++t) {
    const double x = t * 0.07;
    const double y = rho_inv(x);
    CHECK(std::abs(rho(y) - x) <= 1e-12 * std::max(1.0, x));
    CHECK(y >= prev);  // monotone
    prev = y;
  }
  (void)rng;
}

TEST_CASE("dual distance bound") {
  CHECK(dual_distance_bound(0.0) == 0.0);
  CHECK(dual_distance_bound(1.0 - std::log(2.0)) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(dual_distance_bound(-1.0), std::invalid_argument);
}

TEST_CASE("lipschitz constant of the normal density") {
  // max |phi'| is attained at +-1 and equals 1/sqrt(2 pi e)
  const double expect = 1.0 / std::sqrt(2.0 * M_PI * M_E);
  CHECK(phi(1.0) == doctest::Approx(expect).epsilon(1e-12));
  double best = 0.0;
  for (double t = -4.0; t <= 4.0; t += 1e-4)
    best = std::max(best, std::abs(-t * phi(t)));
  CHECK(best <= expect * (1.0 + 1e-7));
  CHECK(best >= expect * (1.0 - 1e-7));
}

TEST_CASE("full certificate pipeline on a solved instance") {
  const Vec xs = cluster_samples(50, 11);
  SolverConfig cfg;
  cfg.gap_tol = 1e-8;
  cfg.outer_tol = 0.0;

  double prev_p_hat = std::numeric_limits<double>::infinity();
  double prev_b18 = std::numeric_limits<double>::infinity();
  double prev_lower = -std::numeric_limits<double>::infinity();
  // nested grids: 64 -> 127 -> 253 atoms (each refines the previous)
  for (int M : {64, 127, 253}) {
    auto p = gaussian_location_matrix(xs, uniform_location_grid(xs, M), 1.0);
    auto r = minimize(p, ShapeConstraint::simplex(M), cfg);
    const KWCertificate cert = kw_certificate(p, r.w);

    for (double v : cert.nu) CHECK(v > 0.0);
    CHECK(cert.gamma >= 50.0 * (1.0 - 1e-9));
    CHECK(cert.gap_bound_17 >= -1e-9);
    CHECK(cert.gap_bound_18 >= -1e-9);
    CHECK(cert.feasibility_margin <= 50.0 * 1e-6);
    CHECK(cert.dual_distance_bound ==
          rho_inv(std::min(cert.gap_bound_17, cert.gap_bound_18)));

    // nested refinement: p_hat never increases, bound18 tightens, and the
    // implied lower bound p_hat - min(bounds) never decreases
    CHECK(cert.p_hat <= prev_p_hat + 1e-9);
    CHECK(cert.gap_bound_18 <= prev_b18 + 1e-12);
    const double lower =
        cert.p_hat - std::min(cert.gap_bound_17, cert.gap_bound_18);
    CHECK(lower <= cert.p_hat);
    CHECK(lower >= prev_lower - 1e-9);
    prev_p_hat = cert.p_hat;
    prev_b18 = cert.gap_bound_18;
    prev_lower = lower;
  }
}

TEST_CASE("complementary slackness at a certified optimum") {
  const Vec xs = cluster_samples(30, 19);
  const int M = 40;
  auto p = gaussian_location_matrix(xs, uniform_location_grid(xs, M), 1.0);
  SolverConfig cfg;
  cfg.gap_tol = 1e-10;
  cfg.outer_tol = 0.0;
  auto r = minimize(p, ShapeConstraint::simplex(M), cfg);
  const Vec nu = dual_from_primal(p, r.w);
  const double n = static_cast<double>(p.N);
  for (int j = 0; j < M; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      s += nu[i] * phi(xs[i] - p.basis.locations[j]);
    if (s < n - 1e-6 * n) CHECK(r.w[j] <= 1e-8);
  }
}

TEST_CASE("certificate rejects a non-bracketing grid") {
  const Vec xs{-1.0, 0.0, 5.0};
  auto p = gaussian_location_matrix(xs, {-0.5, 0.0, 0.5}, 1.0);
  CHECK_THROWS_AS(kw_certificate(p, Vec(3, 1.0 / 3)), std::invalid_argument);
}
