#include "shapemix/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shapemix/kernels.hpp"

namespace shapemix {

namespace {

Vec em_step_unchecked(const MixtureProblem& p, const Vec& w, double* norm) {
  Vec acc(p.M);
  const double rmin =
      kernels::em_accumulate(p.B.data(), p.M, p.N, w.data(), acc.data());
  if (!(rmin > kPositivityFloor))
    throw std::domain_error("em_step: f(w) is +inf at the current iterate");
  Vec next(p.M);
  const double invn = 1.0 / static_cast<double>(p.N);
  double sum = 0.0;
  for (int i = 0; i < p.M; ++i) {
    next[i] = w[i] * acc[i] * invn;
    sum += next[i];
  }
  double delta = 0.0;
  for (int i = 0; i < p.M; ++i) {
    next[i] /= sum;  // kill simplex drift
    delta = std::max(delta, std::abs(next[i] - w[i]));
  }
  if (norm) *norm = delta;
  return next;
}

}  // namespace

Vec em_step(const MixtureProblem& p, const Vec& w) {
  if (static_cast<int>(w.size()) != p.M)
    throw std::invalid_argument("em_step: dimension mismatch");
  for (double x : w)
    if (!(x > 0.0))
      throw std::invalid_argument(
          "em_step: weights must be strictly positive (EM cannot revive "
          "zero weights)");
  return em_step_unchecked(p, w, nullptr);
}

EMState em_solve(const MixtureProblem& p, double tol, long max_iters) {
  if (!(tol > 0.0)) throw std::invalid_argument("em_solve: tol must be > 0");
  EMState st;
  st.w.assign(p.M, 1.0 / p.M);
  if (p.M == 1) {
    st.converged = true;
    return st;
  }
  for (long it = 0; it < max_iters; ++it) {
    st.w = em_step_unchecked(p, st.w, &st.last_update_norm);
    st.iters = it + 1;
    if (st.last_update_norm < tol) {
      st.converged = true;
      break;
    }
  }
  return st;
}

// ------------------------------------------------------- brute force

namespace {

// One linear inequality a.w >= b (b = 0 throughout).
struct Ineq {
  Vec a;
};

std::vector<Ineq> defining_inequalities(const ShapeConstraint& c) {
  const int M = c.dim;
  std::vector<Ineq> out;
  auto unit = [&](int i, double v) {
    Vec a(M, 0.0);
    a[i] = v;
    return a;
  };
  for (int i = 0; i < M; ++i) out.push_back({unit(i, 1.0)});  // w_i >= 0

  auto diff = [&](int i, int j) {  // w_i - w_j >= 0
    Vec a(M, 0.0);
    a[i] = 1.0;
    a[j] = -1.0;
    return a;
  };
  auto curv = [&](int i, double sign) {  // sign*(2w_i - w_{i-1} - w_{i+1}) >= 0
    Vec a(M, 0.0);
    a[i] = 2.0 * sign;
    a[i - 1] = -sign;
    a[i + 1] = -sign;
    return a;
  };

  switch (c.family) {
    case Family::Simplex: break;
    case Family::Decreasing:
      for (int i = 0; i + 1 < M; ++i) out.push_back({diff(i, i + 1)});
      break;
    case Family::Increasing:
      for (int i = 0; i + 1 < M; ++i) out.push_back({diff(i + 1, i)});
      break;
    case Family::Concave:
      for (int i = 1; i + 1 < M; ++i) out.push_back({curv(i, 1.0)});
      break;
    case Family::Convex:
      for (int i = 1; i + 1 < M; ++i) out.push_back({curv(i, -1.0)});
      break;
    case Family::ConcaveIncreasing:
      for (int i = 1; i + 1 < M; ++i) out.push_back({curv(i, 1.0)});
      for (int i = 0; i + 1 < M; ++i) out.push_back({diff(i + 1, i)});
      break;
    case Family::ConcaveDecreasing:
      for (int i = 1; i + 1 < M; ++i) out.push_back({curv(i, 1.0)});
      for (int i = 0; i + 1 < M; ++i) out.push_back({diff(i, i + 1)});
      break;
    case Family::ConvexIncreasing:
      for (int i = 1; i + 1 < M; ++i) out.push_back({curv(i, -1.0)});
      for (int i = 0; i + 1 < M; ++i) out.push_back({diff(i + 1, i)});
      break;
    case Family::ConvexDecreasing:
      for (int i = 1; i + 1 < M; ++i) out.push_back({curv(i, -1.0)});
      for (int i = 0; i + 1 < M; ++i) out.push_back({diff(i, i + 1)});
      break;
    case Family::UnimodalFixed:
      for (int i = 0; i + 1 < c.mode; ++i) out.push_back({diff(i + 1, i)});
      for (int i = c.mode - 1; i + 1 < M; ++i) out.push_back({diff(i, i + 1)});
      break;
  }
  return out;
}

// Gaussian elimination with partial pivoting; false when singular.
bool solve_square(std::vector<Vec> A, Vec b, Vec& x) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-10) return false;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const double m = A[r][col] / A[col][col];
      if (m == 0.0) continue;
      for (int cc = col; cc < n; ++cc) A[r][cc] -= m * A[col][cc];
      b[r] -= m * b[col];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int cc = r + 1; cc < n; ++cc) acc -= A[r][cc] * x[cc];
    x[r] = acc / A[r][r];
  }
  return true;
}

}  // namespace

std::vector<Vec> brute_force_vertices(const ShapeConstraint& c) {
  const int M = c.dim;
  if (M > 5)
    throw std::invalid_argument("brute_force_vertices: intended for M <= 5");
  if (M == 1) return {Vec{1.0}};

  const std::vector<Ineq> ineqs = defining_inequalities(c);
  const int n = static_cast<int>(ineqs.size());
  std::vector<Vec> found;

  // choose M-1 of the inequalities as equalities, plus the simplex sum
  std::vector<int> pick(M - 1);
  auto emit = [&]() {
    std::vector<Vec> A;
    A.push_back(Vec(M, 1.0));  // sum w = 1
    for (int idx : pick) A.push_back(ineqs[idx].a);
    Vec b(M, 0.0);
    b[0] = 1.0;
    Vec x;
    if (!solve_square(A, b, x)) return;
    if (!membership(c, x, 1e-9)) return;
    for (double& v : x)
      if (std::abs(v) < 1e-12) v = 0.0;
    for (const Vec& y : found) {
      double d = 0.0;
      for (int i = 0; i < M; ++i) d = std::max(d, std::abs(y[i] - x[i]));
      if (d <= 1e-10) return;  // duplicate
    }
    found.push_back(x);
  };

  // iterate over all (M-1)-subsets of [n]
  for (int i = 0; i < M - 1; ++i) pick[i] = i;
  while (true) {
    emit();
    int pos = M - 2;
    while (pos >= 0 && pick[pos] == n - (M - 1) + pos) --pos;
    if (pos < 0) break;
    ++pick[pos];
    for (int i = pos + 1; i < M - 1; ++i) pick[i] = pick[i - 1] + 1;
  }

  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace shapemix
