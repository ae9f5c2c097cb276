#include "shapemix/kw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shapemix/kernels.hpp"
#include "shapemix/objective.hpp"

namespace shapemix {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double phi(double t) { return std::exp(-0.5 * t * t) * kInvSqrt2Pi; }

void check_unit_gaussian(const MixtureProblem& p) {
  if (p.basis.family != BasisSpec::Family::GaussianLocation ||
      p.basis.sigma != 1.0)
    throw std::invalid_argument(
        "kw: certificates require the unit-variance Gaussian location basis");
}

double bump_sum(const Vec& nu, const Vec& samples, double mu) {
  double acc = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) acc += nu[i] * phi(samples[i] - mu);
  return acc;
}

// Golden-section maximization on [lo, hi] down to interval width tol.
double golden_max(const Vec& nu, const Vec& samples, double lo, double hi,
                  double tol) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = bump_sum(nu, samples, x1);
  double f2 = bump_sum(nu, samples, x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = bump_sum(nu, samples, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = bump_sum(nu, samples, x1);
    }
  }
  return std::max(f1, f2);
}

}  // namespace

Vec dual_from_primal(const MixtureProblem& p, const Vec& w) {
  check_unit_gaussian(p);
  const Ratios r = compute_ratios(p, w);
  if (!r.finite)
    throw std::domain_error("dual_from_primal: f(w) is +inf");
  Vec nu(p.N);
  for (std::int64_t i = 0; i < p.N; ++i) nu[i] = 1.0 / r.inner[i];
  return nu;
}

double dual_feasibility_margin(const Vec& nu, const Vec& samples,
                               const Vec& grid_atoms) {
  if (nu.size() != samples.size())
    throw std::invalid_argument("dual_feasibility_margin: size mismatch");
  const double n = static_cast<double>(nu.size());
  double worst = -std::numeric_limits<double>::infinity();
  for (double mu : grid_atoms) worst = std::max(worst, bump_sum(nu, samples, mu));
  return worst - n;
}

double gamma_estimate(const Vec& nu, const Vec& samples) {
  if (nu.size() != samples.size() || nu.empty())
    throw std::invalid_argument("gamma_estimate: size mismatch");
  for (double v : nu)
    if (!(v > 0.0))
      throw std::invalid_argument("gamma_estimate: nu must be positive");

  double nu_sum = kernels::sum(nu.data(), static_cast<std::int64_t>(nu.size()));
  const double lipschitz = nu_sum / std::sqrt(2.0 * M_PI * M_E);
  // S(mu) <= phi(0) * sum(nu) everywhere; exact when the bumps pile up.
  const double domination = phi(0.0) * nu_sum;

  Vec sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  if (sorted.size() == 1) {
    // single bump: the continuum maximum sits at the sample itself
    return std::min(bump_sum(nu, samples, sorted[0]), domination);
  }

  // Scan grid: 10 subdivisions per inter-sample gap, endpoints shared.
  Vec grid;
  grid.push_back(sorted.front());
  for (std::size_t s = 0; s + 1 < sorted.size(); ++s) {
    const double a = sorted[s], b = sorted[s + 1];
    for (int t = 1; t <= 10; ++t)
      grid.push_back(a + (b - a) * (t / 10.0));
  }
  Vec val(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    val[i] = bump_sum(nu, samples, grid[i]);

  // Certified per-cell bound: every point of a cell sits within half a
  // cell width of an endpoint.
  double bound = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double cell = grid[i + 1] - grid[i];
    bound = std::max(bound,
                     std::max(val[i], val[i + 1]) + lipschitz * 0.5 * cell);
  }

  // Refine interior local maxima; the refined values sharpen the lower
  // estimate (and the N=1-style exact cases) without weakening the bound.
  double refined = *std::max_element(val.begin(), val.end());
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
    if (val[i] >= val[i - 1] && val[i] >= val[i + 1])
      refined = std::max(refined,
                         golden_max(nu, samples, grid[i - 1], grid[i + 1], 1e-10));
  bound = std::max(bound, refined);

  return std::min(bound, domination);
}

std::pair<double, double> gap_bounds(double p_hat, double gamma,
                                     std::int64_t N, double delta_g,
                                     const Vec& nu) {
  (void)p_hat;  // reported alongside the bounds, not used in them
  const double n = static_cast<double>(N);
  if (static_cast<std::int64_t>(nu.size()) != N)
    throw std::invalid_argument("gap_bounds: nu size mismatch");
  if (!(delta_g >= 0.0))
    throw std::invalid_argument("gap_bounds: delta_g must be >= 0");
  if (gamma < n * (1.0 - 1e-9))
    throw std::invalid_argument(
        "gap_bounds: gamma below N, certificate invalid");
  const double bound17 = n * std::log(gamma / n);
  const double mean_nu = kernels::sum(nu.data(), N) / n;
  const double bound18 =
      n * std::log1p(delta_g / std::sqrt(8.0 * M_PI * M_E) * mean_nu);
  return {bound17, bound18};
}

double rho(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("rho: t must be >= 0");
  return t - std::log1p(t);
}

double rho_inv(double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("rho_inv: x must be >= 0");
  if (x == 0.0) return 0.0;
  double hi = std::max(1.0, 2.0 * x + 2.0 * std::sqrt(2.0 * x));
  while (rho(hi) < x) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rho(mid) >= x)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double dual_distance_bound(double gap_bound) {
  if (!(gap_bound >= 0.0))
    throw std::invalid_argument("dual_distance_bound: gap must be >= 0");
  return rho_inv(gap_bound);
}

KWCertificate kw_certificate(const MixtureProblem& p, const Vec& w) {
  check_unit_gaussian(p);
  const Vec& atoms = p.basis.locations;
  const auto [smin, smax] =
      std::minmax_element(p.samples.begin(), p.samples.end());
  if (!(atoms.front() <= *smin && *smax <= atoms.back()))
    throw std::invalid_argument(
        "kw_certificate: the atom grid must bracket the samples "
        "(mu_1 <= min X <= max X <= mu_M)");

  KWCertificate cert;
  cert.nu = dual_from_primal(p, w);
  cert.feasibility_margin = dual_feasibility_margin(cert.nu, p.samples, atoms);
  cert.p_hat = static_cast<double>(p.N) * f_value(p, w);

  Vec nu_scaled = cert.nu;
  if (cert.feasibility_margin > 0.0) {
    const double n = static_cast<double>(p.N);
    const double scale = n / (n + cert.feasibility_margin);
    for (double& v : nu_scaled) v *= scale;
  }
  cert.gamma = gamma_estimate(nu_scaled, p.samples);

  double delta_g = 0.0;
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i)
    delta_g = std::max(delta_g, atoms[i + 1] - atoms[i]);

  std::tie(cert.gap_bound_17, cert.gap_bound_18) =
      gap_bounds(cert.p_hat, cert.gamma, p.N, delta_g, nu_scaled);
  cert.dual_distance_bound = dual_distance_bound(
      std::max(0.0, std::min(cert.gap_bound_17, cert.gap_bound_18)));
  return cert;
}

}  // namespace shapemix
