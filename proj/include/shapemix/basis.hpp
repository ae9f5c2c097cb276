#pragma once

#include <cstdint>
#include <vector>

namespace shapemix {

using Vec = std::vector<double>;

// Mixture proportions on the unit simplex.  Kept as a plain vector;
// check_simplex_weights validates the invariants (entries >= -1e-12 up
// to rounding, sum within tolerance of 1).
using SimplexWeights = Vec;

struct BasisSpec {
  enum class Family { Bernstein, GaussianLocation };
  Family family = Family::Bernstein;
  int components = 0;  // M
  Vec locations;       // gaussian only, strictly increasing
  double sigma = 0.0;  // gaussian only, > 0

  static BasisSpec bernstein(int M);
  static BasisSpec gaussian_location(Vec locations, double sigma);
};

// Immutable problem instance: B[j*M+i] = psi_i(X_j) (column-major, one
// column per sample).  Safe to share across threads after construction.
struct MixtureProblem {
  BasisSpec basis;
  int M = 0;
  std::int64_t N = 0;
  Vec samples;
  Vec B;

  const double* column(std::int64_t j) const { return B.data() + j * M; }
};

// Smallest admissible inner product / matrix-column maximum; columns
// entirely below this would pin f at +inf for every feasible w.
inline constexpr double kPositivityFloor = 1e-300;

void check_simplex_weights(const Vec& w, double sum_tol = 1e-6,
                           double neg_tol = 1e-9);

// Bernstein basis of degree M evaluated at samples in [0,1]; element m
// is the Beta(m, M-m+1) density.  Coefficients are computed in the log
// domain (log-gamma) so entries stay finite for M up to at least 5000.
// Samples at exactly 0 or 1 follow the 0^0 = 1 convention.
MixtureProblem bernstein_matrix(const Vec& samples, int M);

// B[i][j] = phi((X_j - mu_i)/sigma) with phi the standard normal density.
MixtureProblem gaussian_location_matrix(const Vec& samples, const Vec& locations,
                                        double sigma);

// M equispaced points from min(samples) to max(samples) inclusive.
Vec uniform_location_grid(const Vec& samples, int M);

// sum_i w_i psi_i(x) on the grid; w feasible for the simplex.
Vec density_eval(const BasisSpec& basis, const Vec& w, const Vec& grid);

}  // namespace shapemix
