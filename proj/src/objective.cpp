#include "shapemix/objective.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "shapemix/kernels.hpp"

namespace shapemix {

namespace {

void check_dim(const MixtureProblem& p, const Vec& v, const char* what) {
  if (static_cast<int>(v.size()) != p.M)
    throw std::invalid_argument(std::string(what) +
                                ": dimension mismatch with problem M");
}

}  // namespace

Ratios compute_ratios(const MixtureProblem& p, const Vec& w) {
  check_dim(p, w, "compute_ratios");
  Ratios r;
  r.inner.resize(p.N);
  kernels::column_dots(p.B.data(), p.M, p.N, w.data(), r.inner.data());
  r.finite = kernels::min_value(r.inner.data(), p.N) > kPositivityFloor;
  r.logsum = r.finite ? kernels::sum_log(r.inner.data(), p.N) : 0.0;
  return r;
}

double f_from_ratios(const MixtureProblem& p, const Ratios& r) {
  if (!r.finite) return std::numeric_limits<double>::infinity();
  return -r.logsum / static_cast<double>(p.N);
}

double f_value(const MixtureProblem& p, const Vec& w) {
  return f_from_ratios(p, compute_ratios(p, w));
}

Vec grad_from_ratios(const MixtureProblem& p, const Ratios& r) {
  if (!r.finite)
    throw std::domain_error("grad: infeasible point, f(w) is +inf");
  Vec c(p.N);
  for (std::int64_t j = 0; j < p.N; ++j) c[j] = 1.0 / r.inner[j];
  Vec g(p.M);
  kernels::weighted_column_sum(p.B.data(), p.M, p.N, c.data(), g.data());
  const double scale = -1.0 / static_cast<double>(p.N);
  for (double& x : g) x *= scale;
  return g;
}

Vec grad(const MixtureProblem& p, const Vec& w) {
  return grad_from_ratios(p, compute_ratios(p, w));
}

double hess_quadratic_form_from_ratios(const MixtureProblem& p, const Ratios& r,
                                       const Vec& d) {
  check_dim(p, d, "hess_quadratic_form");
  if (!r.finite)
    throw std::domain_error(
        "hess_quadratic_form: infeasible point, f(w) is +inf");
  Vec s(p.N);
  kernels::column_dots(p.B.data(), p.M, p.N, d.data(), s.data());
  return kernels::sum_sq_ratio(s.data(), r.inner.data(), p.N) /
         static_cast<double>(p.N);
}

double hess_quadratic_form(const MixtureProblem& p, const Vec& w, const Vec& d) {
  return hess_quadratic_form_from_ratios(p, compute_ratios(p, w), d);
}

double local_model_phi(const MixtureProblem& p, const Vec& y, const Vec& w) {
  check_dim(p, y, "local_model_phi");
  const Ratios r = compute_ratios(p, w);
  const double fw = f_from_ratios(p, r);
  if (!std::isfinite(fw))
    throw std::domain_error("local_model_phi: f(w) is +inf");
  const Vec g = grad_from_ratios(p, r);
  Vec d(p.M);
  for (int i = 0; i < p.M; ++i) d[i] = y[i] - w[i];
  double lin = 0.0;
  for (int i = 0; i < p.M; ++i) lin += g[i] * d[i];
  const double quad = hess_quadratic_form_from_ratios(p, r, d);
  return fw + lin + 0.5 * quad;
}

double cubic_model(const MixtureProblem& p, const Vec& y, const Vec& w,
                   double L) {
  if (!(L > 0.0))
    throw std::invalid_argument("cubic_model: L must be positive");
  check_dim(p, y, "cubic_model");
  const Ratios r = compute_ratios(p, w);
  const double fw = f_from_ratios(p, r);
  if (!std::isfinite(fw)) throw std::domain_error("cubic_model: f(w) is +inf");
  const Vec g = grad_from_ratios(p, r);
  Vec d(p.M);
  for (int i = 0; i < p.M; ++i) d[i] = y[i] - w[i];
  double lin = 0.0;
  for (int i = 0; i < p.M; ++i) lin += g[i] * d[i];
  const double quad = hess_quadratic_form_from_ratios(p, r, d);
  return fw + lin + 0.5 * quad + (L / 6.0) * std::pow(quad, 1.5);
}

}  // namespace shapemix
