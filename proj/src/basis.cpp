#include "shapemix/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace shapemix {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

void check_column_positive(const Vec& B, int M, std::int64_t j) {
  const double* col = B.data() + j * M;
  for (int i = 0; i < M; ++i)
    if (col[i] >= kPositivityFloor) return;
  throw std::domain_error(
      "mixture matrix: sample " + std::to_string(j) +
      " has no basis element above the positivity floor; the "
      "log-likelihood would be -inf for every feasible w");
}

}  // namespace

BasisSpec BasisSpec::bernstein(int M) {
  if (M < 1) throw std::invalid_argument("bernstein basis: M must be >= 1");
  BasisSpec s;
  s.family = Family::Bernstein;
  s.components = M;
  return s;
}

BasisSpec BasisSpec::gaussian_location(Vec locations, double sigma) {
  if (locations.empty())
    throw std::invalid_argument("gaussian basis: empty location grid");
  for (std::size_t i = 1; i < locations.size(); ++i)
    if (!(locations[i - 1] < locations[i]))
      throw std::invalid_argument(
          "gaussian basis: locations must be strictly increasing");
  if (!(sigma > 0.0))
    throw std::invalid_argument("gaussian basis: sigma must be positive");
  BasisSpec s;
  s.family = Family::GaussianLocation;
  s.components = static_cast<int>(locations.size());
  s.locations = std::move(locations);
  s.sigma = sigma;
  return s;
}

void check_simplex_weights(const Vec& w, double sum_tol, double neg_tol) {
  if (w.empty()) throw std::invalid_argument("simplex weights: empty vector");
  double sum = 0.0;
  for (double x : w) {
    if (!std::isfinite(x))
      throw std::invalid_argument("simplex weights: non-finite entry");
    if (x < -neg_tol)
      throw std::invalid_argument("simplex weights: negative entry " +
                                  std::to_string(x));
    sum += x;
  }
  if (std::abs(sum - 1.0) > sum_tol)
    throw std::invalid_argument("simplex weights: sum " + std::to_string(sum) +
                                " is not 1 within tolerance");
}

namespace {

// log of the Beta(m, M-m+1) normalizing coefficient Gamma(M+1)/(Gamma(m)Gamma(M-m+1))
double log_bernstein_coef(int M, int m) {
  return std::lgamma(M + 1.0) - std::lgamma(static_cast<double>(m)) -
         std::lgamma(M - m + 1.0);
}

double bernstein_eval(int M, int m, double x, double logx, double log1mx,
                      double logcoef) {
  // 0^0 = 1 convention at the endpoints
  if (x == 0.0) return m == 1 ? static_cast<double>(M) : 0.0;
  if (x == 1.0) return m == M ? static_cast<double>(M) : 0.0;
  return std::exp(logcoef + (m - 1) * logx + (M - m) * log1mx);
}

}  // namespace

MixtureProblem bernstein_matrix(const Vec& samples, int M) {
  if (M < 1) throw std::invalid_argument("bernstein_matrix: M must be >= 1");
  if (samples.empty())
    throw std::invalid_argument("bernstein_matrix: no samples");
  for (double x : samples)
    if (!(x >= 0.0 && x <= 1.0))
      throw std::domain_error("bernstein_matrix: sample " + std::to_string(x) +
                              " outside [0,1]");

  MixtureProblem p;
  p.basis = BasisSpec::bernstein(M);
  p.M = M;
  p.N = static_cast<std::int64_t>(samples.size());
  p.samples = samples;
  p.B.resize(static_cast<std::size_t>(p.N) * M);

  std::vector<double> logcoef(M);
  for (int m = 1; m <= M; ++m) logcoef[m - 1] = log_bernstein_coef(M, m);

#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < p.N; ++j) {
    const double x = samples[j];
    const double lx = x > 0.0 ? std::log(x) : 0.0;
    const double l1x = x < 1.0 ? std::log1p(-x) : 0.0;
    double* col = p.B.data() + j * M;
    for (int m = 1; m <= M; ++m)
      col[m - 1] = bernstein_eval(M, m, x, lx, l1x, logcoef[m - 1]);
  }
  for (std::int64_t j = 0; j < p.N; ++j) check_column_positive(p.B, M, j);
  return p;
}

MixtureProblem gaussian_location_matrix(const Vec& samples, const Vec& locations,
                                        double sigma) {
  BasisSpec basis = BasisSpec::gaussian_location(locations, sigma);
  if (samples.empty())
    throw std::invalid_argument("gaussian_location_matrix: no samples");

  MixtureProblem p;
  p.M = basis.components;
  p.N = static_cast<std::int64_t>(samples.size());
  p.samples = samples;
  p.basis = std::move(basis);
  p.B.resize(static_cast<std::size_t>(p.N) * p.M);

  const int M = p.M;
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < p.N; ++j) {
    double* col = p.B.data() + j * M;
    for (int i = 0; i < M; ++i) {
      const double z = (samples[j] - p.basis.locations[i]) / sigma;
      col[i] = std::exp(-0.5 * z * z) * kInvSqrt2Pi;
    }
  }
  for (std::int64_t j = 0; j < p.N; ++j) check_column_positive(p.B, M, j);
  return p;
}

Vec uniform_location_grid(const Vec& samples, int M) {
  if (M < 2)
    throw std::invalid_argument("uniform_location_grid: M must be >= 2");
  if (samples.size() < 2)
    throw std::invalid_argument("uniform_location_grid: need >= 2 samples");
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  if (!(*lo < *hi))
    throw std::domain_error(
        "uniform_location_grid: degenerate sample range (all samples equal)");
  Vec grid(M);
  const double step = (*hi - *lo) / (M - 1);
  for (int i = 0; i < M; ++i) grid[i] = *lo + step * i;
  grid.back() = *hi;
  return grid;
}

Vec density_eval(const BasisSpec& basis, const Vec& w, const Vec& grid) {
  const int M = basis.components;
  if (static_cast<int>(w.size()) != M)
    throw std::invalid_argument("density_eval: weight size mismatch");
  check_simplex_weights(w);
  Vec wc = w;
  for (double& x : wc) x = std::max(x, 0.0);

  Vec out(grid.size(), 0.0);
  if (basis.family == BasisSpec::Family::Bernstein) {
    std::vector<double> logcoef(M);
    for (int m = 1; m <= M; ++m) logcoef[m - 1] = log_bernstein_coef(M, m);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double x = grid[g];
      if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("density_eval: grid point " +
                                std::to_string(x) +
                                " outside the Bernstein support [0,1]");
      const double lx = x > 0.0 ? std::log(x) : 0.0;
      const double l1x = x < 1.0 ? std::log1p(-x) : 0.0;
      double acc = 0.0;
      for (int m = 1; m <= M; ++m)
        acc += wc[m - 1] * bernstein_eval(M, m, x, lx, l1x, logcoef[m - 1]);
      out[g] = acc;
    }
  } else {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      double acc = 0.0;
      for (int i = 0; i < M; ++i) {
        const double z = (grid[g] - basis.locations[i]) / basis.sigma;
        acc += wc[i] * std::exp(-0.5 * z * z) * kInvSqrt2Pi;
      }
      out[g] = acc;
    }
  }
  return out;
}

}  // namespace shapemix
