#pragma once

#include "shapemix/basis.hpp"

namespace shapemix {

// Per-iterate cache of the inner products <B_j, w>.  One O(MN) pass
// produces everything the gradient and Hessian forms need.
struct Ratios {
  Vec inner;            // inner[j] = <B_j, w>
  double logsum = 0.0;  // sum_j log inner[j], valid when finite
  bool finite = false;  // all inner[j] above the positivity floor
};

Ratios compute_ratios(const MixtureProblem& p, const Vec& w);

// f(w) = -(1/N) sum_j log <B_j, w>; +inf when any inner product falls
// at or below the positivity floor (a value, not an error: line
// searches probe near-boundary points).
double f_value(const MixtureProblem& p, const Vec& w);
double f_from_ratios(const MixtureProblem& p, const Ratios& r);

// g_i = -(1/N) sum_j B_ij / <B_j, w>; requires f(w) finite.
Vec grad(const MixtureProblem& p, const Vec& w);
Vec grad_from_ratios(const MixtureProblem& p, const Ratios& r);

// (1/N) sum_j (<B_j, d> / <B_j, w>)^2 = ||d||^2 in the local Hessian norm.
double hess_quadratic_form(const MixtureProblem& p, const Vec& w, const Vec& d);
double hess_quadratic_form_from_ratios(const MixtureProblem& p, const Ratios& r,
                                       const Vec& d);

// Second-order local model of f around w evaluated at y.
double local_model_phi(const MixtureProblem& p, const Vec& y, const Vec& w);

// local model plus (L/6) * ||y-w||^3 in the local Hessian norm; L > 0.
double cubic_model(const MixtureProblem& p, const Vec& y, const Vec& w,
                   double L);

}  // namespace shapemix
