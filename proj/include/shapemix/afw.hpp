#pragma once

#include <utility>
#include <vector>

#include "shapemix/basis.hpp"
#include "shapemix/objective.hpp"
#include "shapemix/polytope.hpp"

namespace shapemix {

// Sparse convex combination over structured vertex ids together with
// the dense iterate it represents.  The weight updates are the exact
// away-step Frank-Wolfe bookkeeping; z is re-synchronized from the
// weights when the reconstruction drift exceeds kResyncDrift.
struct ActiveSet {
  struct Entry {
    VertexId id;
    long ord;  // catalog position, kept sorted ascending
    double weight;
  };
  std::vector<Entry> entries;
  Vec z;

  bool empty() const { return entries.empty(); }
  static ActiveSet single_vertex(const ShapeConstraint& c, VertexId id);
  Vec reconstruct(const ShapeConstraint& c) const;
  std::vector<std::pair<VertexId, double>> pairs() const;
};

inline constexpr double kResyncDrift = 1e-9;

struct StoppingRule {
  double rel_tol = 1e-8;   // on |h_prev - h| / max(|h_prev|, 1)
  long max_iters = 50000;  // cap is reported, not fatal
  // When positive, the relative-change stop is honored only once the
  // model FW gap has fallen below gap_target_rel * max(1, |h|).  The
  // outer loop needs this to certify its own gap: the per-iteration
  // change can underflow rel_tol long before the model is near-optimal.
  double gap_target_rel = 0.0;
};

struct SubproblemResult {
  Vec y;
  ActiveSet active;
  double fw_gap = 0.0;     // model FW gap at exit
  long iters = 0;
  double objective = 0.0;  // h_f(y, w_center)
  bool hit_cap = false;
  bool guard_fallback = false;  // y replaced by w_center to keep h_f <= f
};

// Exact gradient of the cubic model h_f(., w_center) at z; L >= 0
// (L = 0 gives the gradient of the quadratic model).  One O(MN) pass.
Vec model_gradient(const MixtureProblem& p, const Vec& w_center, double L,
                   const Vec& z);

// argmin over [0, alpha_max] of the 1-D restriction of the cubic model
// along d from z; the restriction is convex, so bisection on its
// derivative applies.  Returns 0 when the directional derivative at 0
// is already nonnegative and exactly alpha_max when the derivative is
// still negative there.
double line_search_cubic(const MixtureProblem& p, const Vec& w_center, double L,
                         const Vec& z, const Vec& d, double alpha_max);

// Same search from precomputed 1-D coefficients:
//   phi(a) = const + b*a + c*a^2 + (L/6) * (q0 + q1*a + q2*a^2)^{3/2}.
double line_search_1d(double b, double c, double L, double q0, double q1,
                      double q2, double alpha_max);

// Away-step Frank-Wolfe on h_f(., w_center) over the constraint set.
// Exposed as a state machine so tests can drive single iterations and
// audit the weight bookkeeping.
class SubproblemSolver {
 public:
  SubproblemSolver(const MixtureProblem& p, Vec w_center, double L,
                   ShapeConstraint cons, ActiveSet start);

  // One AFW iteration; false when no step was taken (model optimal).
  bool step();

  SubproblemResult solve(const StoppingRule& rule);

  const ActiveSet& active() const { return active_; }
  const Vec& z() const { return active_.z; }
  double h_value() const { return h_; }
  double fw_gap() const { return fw_gap_; }
  long iters() const { return iters_; }
  double f_center() const { return f_center_; }

  // Recompute the per-sample cache and model value from z; pulls z back
  // to the weight representation if the drift exceeds kResyncDrift.
  void resync();

 private:
  const MixtureProblem& p_;
  Vec w_center_;
  double L_;
  ShapeConstraint cons_;
  Ratios center_;
  double f_center_;
  Vec g_center_;

  ActiveSet active_;
  Vec u_;  // z - w_center
  Vec t_;  // t_j = <B_j, u> / <B_j, w_center>
  double h_ = 0.0;
  double fw_gap_ = 0.0;
  long iters_ = 0;

  // scratch
  Vec coef_, hv_, grad_, sdir_, sigma_;

  void refresh_from_z();
  void apply_fw_step(const VertexId& id, const VertexWindow& win, double alpha);
  void apply_away_step(const VertexId& id, const VertexWindow& win,
                       double alpha, double alpha_max);
};

// Solves the cubic-regularized Newton step over the constraint set.
// An empty start denotes the default: the single vertex minimizing
// <grad f(w_center), v>.  The result keeps h_f(y, w_center) <= f(w_center)
// (condition needed by the outer loop); if the inner loop cannot certify
// that, w_center itself is returned.
SubproblemResult solve_subproblem(const MixtureProblem& p, const Vec& w_center,
                                  double L, const ShapeConstraint& cons,
                                  const ActiveSet& start,
                                  const StoppingRule& rule);

}  // namespace shapemix
