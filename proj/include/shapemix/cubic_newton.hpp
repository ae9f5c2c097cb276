#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shapemix/afw.hpp"
#include "shapemix/basis.hpp"
#include "shapemix/polytope.hpp"

namespace shapemix {

// Outer-loop parameters.  Defaults follow the adaptive schedule the
// solver was tuned with: L0 = 3/sqrt(2), beta = 1.5, geometric
// gamma/rho sequences 0.8^k (summable against k^3), a shorter-step
// phase for the first iterations, and a staged inner tolerance.
struct SolverConfig {
  double L0 = 2.1213203435596424;  // 3/sqrt(2)
  double beta = 1.5;               // must be in (1,2)
  double gamma_base = 0.8;         // gamma_k = gamma_base^k
  double rho_base = 0.8;           // rho_k = rho_base^k
  int shorter_step_iters = 10;
  double shorter_step_factor = 0.5;
  double subtol_early = 1e-8;  // k <= 3
  double subtol_mid = 1e-9;    // 4 <= k <= 9
  double subtol_late = 1e-10;  // k >= 10
  double outer_tol = 1e-10;    // relative f-change stop
  double gap_tol = 1e-6;       // FW-gap certificate stop
  int max_outer = 500;
  long afw_max_iters = 50000;

  double gamma(int k) const;
  double rho(int k) const;
  double subproblem_tol(int k) const;
  void validate() const;
};

enum class SolveStatus { GapCertified, FTolReached, IterationCapped };
enum class StepKind { Init, Full, Shorter, Stall };

const char* step_name(StepKind s);
const char* status_name(SolveStatus s);

struct TraceRow {
  int k = 0;          // outer iteration (0 = initial point)
  double f = 0.0;     // f at the iterate after this iteration
  double L = 0.0;     // regularization parameter in effect
  int retries = 0;    // acceptance failures at this iteration
  long subiters = 0;  // AFW iterations spent
  double fw_gap = 0.0;  // FW-gap certificate of f at the iterate
  StepKind step = StepKind::Init;
};

struct SolveTrace {
  std::vector<TraceRow> rows;
  SolveStatus status = SolveStatus::GapCertified;
};

struct MinimizeResult {
  Vec w;
  SolveTrace trace;
  double f = 0.0;
  double fw_gap = 0.0;
  int outer_iters = 0;
};

// Condition (6)-style acceptance: f(y) <= Phi_f(y,w) + (L/6)||y-w||^3 + gamma,
// with f(y) = +inf counting as a rejection.
bool acceptance_test(const MixtureProblem& p, const Vec& w_k, const Vec& y_k,
                     double L_k, double gamma_k);

// Next-iterate rule: during the shorter-step phase try
// w + factor * (y - w) and keep it iff it is a descent step and within
// rho_k of f(y); otherwise fall back to y when f(y) <= f(w), else stay
// put.
Vec next_iterate(const Vec& w_k, const Vec& y_k, int k,
                 const SolverConfig& config, const MixtureProblem& p);

MinimizeResult minimize(const MixtureProblem& p, const ShapeConstraint& cons,
                        const SolverConfig& config,
                        const std::optional<Vec>& w0 = std::nullopt);

struct UnimodalFit {
  int k_star = 0;
  Vec w;
  Vec per_mode_f;  // final objective for every mode in [1, M]
  MinimizeResult best;
};

// Mode search: solve once per fixed-mode constraint and keep the mode
// with the smallest objective (ties toward the smallest index).
UnimodalFit fit_unimodal(const MixtureProblem& p, const SolverConfig& config);

}  // namespace shapemix
