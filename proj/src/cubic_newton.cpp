#include "shapemix/cubic_newton.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "shapemix/kernels.hpp"
#include "shapemix/objective.hpp"

namespace shapemix {

namespace {

double dot(const Vec& a, const Vec& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

struct Point {
  Vec w;
  Ratios ratios;
  double f = 0.0;
};

Point eval_point(const MixtureProblem& p, Vec w) {
  Point pt;
  pt.ratios = compute_ratios(p, w);
  pt.f = f_from_ratios(p, pt.ratios);
  pt.w = std::move(w);
  return pt;
}

double gap_scale(double f) { return std::max(1.0, std::abs(f)); }

// FW-gap certificate of f at the point: max_{v in C} <g, w - v>.
double fw_gap_at(const MixtureProblem& p, const ShapeConstraint& cons,
                 const Point& pt, Vec* grad_out = nullptr) {
  Vec g = grad_from_ratios(p, pt.ratios);
  const OracleResult o = lp_oracle(cons, g);
  const double gap = dot(g, pt.w) - o.value;
  if (grad_out) *grad_out = std::move(g);
  return gap;
}

// Acceptance right-hand side from the cached center point.
double model_bound(const MixtureProblem& p, const Point& center, const Vec& g,
                   const Vec& y, double L) {
  Vec d(p.M);
  for (int i = 0; i < p.M; ++i) d[i] = y[i] - center.w[i];
  const double quad = hess_quadratic_form_from_ratios(p, center.ratios, d);
  return center.f + dot(g, d) + 0.5 * quad + (L / 6.0) * std::pow(quad, 1.5);
}

struct ChosenStep {
  Point pt;
  StepKind kind = StepKind::Full;
};

ChosenStep choose_next(const MixtureProblem& p, const Point& cur, Point y,
                       int k, const SolverConfig& cfg) {
  const double rho_k = cfg.rho(k);
  if (k <= cfg.shorter_step_iters) {
    Vec ws(p.M);
    for (int i = 0; i < p.M; ++i)
      ws[i] = cur.w[i] + cfg.shorter_step_factor * (y.w[i] - cur.w[i]);
    Point shorter = eval_point(p, std::move(ws));
    if (shorter.f <= cur.f && shorter.f <= y.f + rho_k)
      return {std::move(shorter), StepKind::Shorter};
  }
  if (y.f <= cur.f) return {std::move(y), StepKind::Full};
  return {cur, StepKind::Stall};
}

}  // namespace

double SolverConfig::gamma(int k) const { return std::pow(gamma_base, k); }
double SolverConfig::rho(int k) const { return std::pow(rho_base, k); }

double SolverConfig::subproblem_tol(int k) const {
  if (k <= 3) return subtol_early;
  if (k <= 9) return subtol_mid;
  return subtol_late;
}

void SolverConfig::validate() const {
  if (!(L0 > 0.0)) throw std::invalid_argument("config: L0 must be positive");
  if (!(beta > 1.0 && beta < 2.0))
    throw std::invalid_argument("config: beta must lie in (1,2)");
  if (!(gamma_base >= 0.0 && gamma_base < 1.0) ||
      !(rho_base >= 0.0 && rho_base < 1.0))
    throw std::invalid_argument("config: gamma/rho bases must lie in [0,1)");
  if (!(shorter_step_factor > 0.0 && shorter_step_factor <= 1.0))
    throw std::invalid_argument("config: shorter_step_factor in (0,1]");
  if (max_outer < 1) throw std::invalid_argument("config: max_outer >= 1");
}

const char* step_name(StepKind s) {
  switch (s) {
    case StepKind::Init: return "init";
    case StepKind::Full: return "full";
    case StepKind::Shorter: return "shorter";
    case StepKind::Stall: return "stall";
  }
  return "?";
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::GapCertified: return "converged";
    case SolveStatus::FTolReached: return "converged";
    case SolveStatus::IterationCapped: return "iteration-capped";
  }
  return "?";
}

bool acceptance_test(const MixtureProblem& p, const Vec& w_k, const Vec& y_k,
                     double L_k, double gamma_k) {
  const double fy = f_value(p, y_k);
  if (!std::isfinite(fy)) return false;
  const Point center = eval_point(p, w_k);
  const Vec g = grad_from_ratios(p, center.ratios);
  return fy <= model_bound(p, center, g, y_k, L_k) + gamma_k;
}

Vec next_iterate(const Vec& w_k, const Vec& y_k, int k,
                 const SolverConfig& config, const MixtureProblem& p) {
  Point cur = eval_point(p, w_k);
  Point y = eval_point(p, y_k);
  return choose_next(p, cur, std::move(y), k, config).pt.w;
}

MinimizeResult minimize(const MixtureProblem& p, const ShapeConstraint& cons,
                        const SolverConfig& config,
                        const std::optional<Vec>& w0) {
  config.validate();
  if (cons.dim != p.M)
    throw std::invalid_argument("minimize: constraint dimension != M");

  MinimizeResult res;
  if (p.M == 1) {
    res.w = Vec{1.0};
    res.f = f_value(p, res.w);
    res.fw_gap = 0.0;
    res.trace.rows.push_back({0, res.f, config.L0, 0, 0, 0.0, StepKind::Init});
    res.trace.status = SolveStatus::GapCertified;
    return res;
  }

  Vec start = w0 ? *w0 : Vec(p.M, 1.0 / p.M);
  if (!membership(cons, start, 1e-9))
    throw std::invalid_argument("minimize: w0 infeasible for the constraint");
  Point cur = eval_point(p, start);
  if (!std::isfinite(cur.f))
    throw std::invalid_argument("minimize: f(w0) is +inf");

  double gap = fw_gap_at(p, cons, cur);
  res.trace.rows.push_back({0, cur.f, config.L0, 0, 0, gap, StepKind::Init});

  double L = config.L0;
  ActiveSet warm;  // empty = default vertex start
  SolveStatus status = SolveStatus::IterationCapped;
  int iters = 0;

  if (gap <= config.gap_tol * gap_scale(cur.f)) {
    status = SolveStatus::GapCertified;
  } else {
    for (int k = 1; k <= config.max_outer; ++k) {
      const double gamma_k = config.gamma(k);
      const StoppingRule rule{config.subproblem_tol(k), config.afw_max_iters,
                              0.1 * config.gap_tol};

      const Vec g_cur = grad_from_ratios(p, cur.ratios);
      int retries = 0;
      SubproblemResult sub;
      Point y;
      while (true) {
        sub = solve_subproblem(p, cur.w, L, cons, warm, rule);
        y = eval_point(p, sub.y);
        const bool accept =
            std::isfinite(y.f) &&
            y.f <= model_bound(p, cur, g_cur, y.w, L) + gamma_k;
        if (accept) break;
        L *= config.beta;
        ++retries;
        if (retries > 200)
          throw std::runtime_error(
              "minimize: acceptance condition kept failing while L grew; "
              "this should be impossible for a finite instance");
      }
      warm = sub.active;

      ChosenStep chosen = choose_next(p, cur, std::move(y), k, config);
      cur = std::move(chosen.pt);
      iters = k;

      gap = fw_gap_at(p, cons, cur);
      res.trace.rows.push_back(
          {k, cur.f, L, retries, sub.iters, gap, chosen.kind});

      if (gap <= config.gap_tol * gap_scale(cur.f)) {
        status = SolveStatus::GapCertified;
        break;
      }
      const double f_prev = res.trace.rows[res.trace.rows.size() - 2].f;
      if (std::abs(f_prev - cur.f) <= config.outer_tol * gap_scale(f_prev)) {
        status = SolveStatus::FTolReached;
        break;
      }
    }
  }

  res.w = cur.w;
  res.f = cur.f;
  res.fw_gap = gap;
  res.outer_iters = iters;
  res.trace.status = status;
  return res;
}

UnimodalFit fit_unimodal(const MixtureProblem& p, const SolverConfig& config) {
  UnimodalFit fit;
  fit.per_mode_f.resize(p.M);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= p.M; ++k) {
    MinimizeResult r =
        minimize(p, ShapeConstraint::unimodal_fixed(p.M, k), config);
    fit.per_mode_f[k - 1] = r.f;
    if (r.f < best) {
      best = r.f;
      fit.k_star = k;
      fit.best = std::move(r);
    }
  }
  fit.w = fit.best.w;
  return fit;
}

}  // namespace shapemix
