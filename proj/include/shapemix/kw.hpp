#pragma once

#include <utility>

#include "shapemix/basis.hpp"

namespace shapemix {

// Discretization certificates for the unit-variance Gaussian location
// problem: how far the optimum over a fixed atom grid can sit above the
// optimum over all mixing distributions.  Objectives here are the
// unnormalized negative log-likelihoods (N times the solver's f).
struct KWCertificate {
  Vec nu;                           // dual vector, one entry per sample
  double feasibility_margin = 0.0;  // max over atoms of sum_i nu_i phi(...) - N
  double gamma = 0.0;               // certified bound on the continuum maximum
  double p_hat = 0.0;               // N * f(w), the discretized optimum value
  double gap_bound_17 = 0.0;        // N log(gamma / N)
  double gap_bound_18 = 0.0;        // N log(1 + dG/sqrt(8 pi e) * mean(nu))
  double dual_distance_bound = 0.0;
};

// nu_i = 1 / sum_j w_j phi(X_i - mu_j); requires a unit-variance
// Gaussian location basis (the setting the certificates are stated for).
Vec dual_from_primal(const MixtureProblem& p, const Vec& w);

// max over the atom grid of sum_i nu_i phi(X_i - mu) - N.
double dual_feasibility_margin(const Vec& nu, const Vec& samples,
                               const Vec& grid_atoms);

// Certified upper bound on max over all real mu of sum_i nu_i phi(X_i - mu):
// a scan with 10 points per inter-sample gap plus the Lipschitz slack of
// phi per cell, refined around local maxima by golden section, and capped
// by the bump-domination bound phi(0) * sum_i nu_i.  The tails beyond the
// sample range are monotone and need no search.
double gamma_estimate(const Vec& nu, const Vec& samples);

// (N log(gamma/N), N log(1 + delta_g / sqrt(8 pi e) * mean(nu))).
// gamma below N (beyond rounding slack) invalidates the certificate.
std::pair<double, double> gap_bounds(double p_hat, double gamma,
                                     std::int64_t N, double delta_g,
                                     const Vec& nu);

// rho(t) = t - log(1+t) and its inverse on [0, inf).
double rho(double t);
double rho_inv(double x);

// rho^{-1} applied to a primal gap bound: bounds the weighted distance
// between the discrete and continuum dual optima.
double dual_distance_bound(double gap_bound);

// Full pipeline from a primal solution: recover nu, measure the grid
// margin, fold a positive margin into nu by the rescaling nu * N/(N+m)
// (which makes the emitted bounds valid for inexact solutions), then
// compute gamma, both gap bounds and the dual distance bound.  The
// reported feasibility_margin is the raw pre-scaling margin.  Requires
// the atom grid to bracket the samples.
KWCertificate kw_certificate(const MixtureProblem& p, const Vec& w);

}  // namespace shapemix
