#pragma once

#include "shapemix/basis.hpp"
#include "shapemix/polytope.hpp"

namespace shapemix {

// Independent oracles backing the test suite: the classical EM fixed
// point for simplex-constrained mixture proportions, and a geometric
// vertex enumerator that solves every active-constraint subsystem.

struct EMState {
  Vec w;
  long iters = 0;
  double last_update_norm = 0.0;
  bool converged = false;
};

// w'_i = w_i * (1/N) sum_j B_ij / <B_j, w>, renormalized.  Requires a
// strictly positive w: the multiplicative update cannot revive zeros.
Vec em_step(const MixtureProblem& p, const Vec& w);

// Iterate from the uniform vector until max_i |w'_i - w_i| < tol or the
// iteration cap; a cap hit is reported in the state, not an error.
EMState em_solve(const MixtureProblem& p, double tol, long max_iters);

// All solutions of (simplex equality + M-1 active inequality
// constraints) that are feasible, deduplicated; M <= 5.
std::vector<Vec> brute_force_vertices(const ShapeConstraint& c);

}  // namespace shapemix
