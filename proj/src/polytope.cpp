#include "shapemix/polytope.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace shapemix {

namespace {

[[noreturn]] void bad_id(const char* what) {
  throw std::invalid_argument(std::string("vertex id invalid for ") + what);
}

void check_constraint(const ShapeConstraint& c) {
  if (c.dim < 1) throw std::invalid_argument("constraint: dim must be >= 1");
  if (c.family == Family::UnimodalFixed && (c.mode < 1 || c.mode > c.dim))
    throw std::invalid_argument("unimodal_fixed: mode outside [1, M]");
}

}  // namespace

ShapeConstraint ShapeConstraint::make(Family f, int M, int mode) {
  ShapeConstraint c{f, M, f == Family::UnimodalFixed ? mode : 0};
  check_constraint(c);
  return c;
}

const char* family_name(Family f) {
  switch (f) {
    case Family::Simplex: return "simplex";
    case Family::Decreasing: return "decreasing";
    case Family::Increasing: return "increasing";
    case Family::Concave: return "concave";
    case Family::Convex: return "convex";
    case Family::ConcaveIncreasing: return "concave-increasing";
    case Family::ConcaveDecreasing: return "concave-decreasing";
    case Family::ConvexIncreasing: return "convex-increasing";
    case Family::ConvexDecreasing: return "convex-decreasing";
    case Family::UnimodalFixed: return "unimodal-fixed";
  }
  return "?";
}

long catalog_size(const ShapeConstraint& c) {
  check_constraint(c);
  const long M = c.dim;
  if (M == 1) return 1;
  switch (c.family) {
    case Family::Convex:
      // The two full ramps (k = M) of the printed 2M-element catalog
      // satisfy only M-1 active constraints, so they are interior to
      // edges, not vertices; the catalog keeps k <= M-1 on each side.
      return 2 * (M - 1);
    case Family::UnimodalFixed:
      return static_cast<long>(c.mode) * (M - c.mode + 1);
    default:
      return M;
  }
}

long catalog_ordinal(const ShapeConstraint& c, VertexId id) {
  check_constraint(c);
  const int M = c.dim;
  if (M == 1) {
    if (id.i != 1) bad_id(family_name(c.family));
    return 0;
  }
  switch (c.family) {
    case Family::Convex:
      if (id.i < 1 || id.i > M - 1 || (id.j != 0 && id.j != 1))
        bad_id("convex");
      return static_cast<long>(id.j) * (M - 1) + (id.i - 1);
    case Family::UnimodalFixed: {
      const int k = c.mode;
      if (id.i < 1 || id.i > k || id.j < k || id.j > M) bad_id("unimodal");
      return static_cast<long>(id.i - 1) * (M - k + 1) + (id.j - k);
    }
    default:
      if (id.i < 1 || id.i > M || id.j != 0) bad_id(family_name(c.family));
      return id.i - 1;
  }
}

VertexId vertex_id_at(const ShapeConstraint& c, long ordinal) {
  check_constraint(c);
  if (ordinal < 0 || ordinal >= catalog_size(c))
    throw std::invalid_argument("vertex ordinal out of range");
  const int M = c.dim;
  if (M == 1) return {1, c.family == Family::UnimodalFixed ? 1 : 0};
  switch (c.family) {
    case Family::Convex: {
      const long side = ordinal / (M - 1);
      return {static_cast<int>(ordinal % (M - 1)) + 1, static_cast<int>(side)};
    }
    case Family::UnimodalFixed: {
      const int k = c.mode;
      const long span = M - k + 1;
      return {static_cast<int>(ordinal / span) + 1,
              static_cast<int>(ordinal % span) + k};
    }
    default:
      return {static_cast<int>(ordinal) + 1, 0};
  }
}

VertexWindow vertex_window(const ShapeConstraint& c, VertexId id) {
  check_constraint(c);
  const int M = c.dim;
  catalog_ordinal(c, id);  // validates
  VertexWindow w;
  if (M == 1) {
    w.lo = 0;
    w.vals = {1.0};
    return w;
  }
  const int i = id.i;
  switch (c.family) {
    case Family::Simplex:
      w.lo = i - 1;
      w.vals = {1.0};
      break;
    case Family::Decreasing:
      w.lo = 0;
      w.vals.assign(i, 1.0 / i);
      break;
    case Family::Increasing:
      w.lo = i - 1;
      w.vals.assign(M - i + 1, 1.0 / (M - i + 1));
      break;
    case Family::Concave: {
      const double cM = 2.0 / (static_cast<double>(M) * (M - 1));
      if (i == 1) {
        w.lo = 1;
        w.vals.resize(M - 1);
        for (int p = 2; p <= M; ++p) w.vals[p - 2] = cM * (p - 1);
      } else if (i == M) {
        w.lo = 0;
        w.vals.resize(M - 1);
        for (int p = 1; p <= M - 1; ++p) w.vals[p - 1] = cM * (M - p);
      } else {
        const double pj = 2.0 / (static_cast<double>(M - 1) * (i - 1));
        const double qj = 2.0 / (static_cast<double>(M - 1) * (M - i));
        w.lo = 1;
        w.vals.resize(M - 2);
        for (int p = 2; p <= i; ++p) w.vals[p - 2] = pj * (p - 1);
        for (int p = i + 1; p <= M - 1; ++p) w.vals[p - 2] = qj * (M - p);
      }
      break;
    }
    case Family::Convex: {
      const double ak = 0.5 * static_cast<double>(i) * (i + 1);
      w.vals.resize(i);
      if (id.j == 0) {  // zeros first, ramp 1..k up to position M
        w.lo = M - i;
        for (int t = 1; t <= i; ++t) w.vals[t - 1] = t / ak;
      } else {  // ramp k..1 from position 1, zeros after
        w.lo = 0;
        for (int t = 1; t <= i; ++t) w.vals[t - 1] = (i + 1 - t) / ak;
      }
      break;
    }
    case Family::ConcaveIncreasing: {
      if (i == 1) {
        w.lo = 0;
        w.vals.assign(M, 1.0 / M);
      } else {
        const double ri = 2.0 / (static_cast<double>(2 * M - i) * (i - 1));
        w.lo = 1;
        w.vals.resize(M - 1);
        for (int p = 2; p <= i; ++p) w.vals[p - 2] = ri * (p - 1);
        for (int p = i + 1; p <= M; ++p) w.vals[p - 2] = ri * (i - 1);
      }
      break;
    }
    case Family::ConcaveDecreasing: {
      if (i == 1) {
        w.lo = 0;
        w.vals.assign(M, 1.0 / M);
      } else {
        const double ri = 2.0 / (static_cast<double>(2 * M - i) * (i - 1));
        w.lo = 0;
        w.vals.resize(M - 1);
        for (int p = 1; p <= M - i; ++p) w.vals[p - 1] = ri * (i - 1);
        for (int p = M - i + 1; p <= M - 1; ++p) w.vals[p - 1] = ri * (M - p);
      }
      break;
    }
    case Family::ConvexIncreasing: {
      if (i == M) {
        w.lo = 0;
        w.vals.assign(M, 1.0 / M);
      } else {
        const double ci = 2.0 / (static_cast<double>(i) * (i + 1));
        w.lo = M - i;
        w.vals.resize(i);
        for (int t = 1; t <= i; ++t) w.vals[t - 1] = ci * t;
      }
      break;
    }
    case Family::ConvexDecreasing: {
      if (i == M) {
        w.lo = 0;
        w.vals.assign(M, 1.0 / M);
      } else {
        const double ci = 2.0 / (static_cast<double>(i) * (i + 1));
        w.lo = 0;
        w.vals.resize(i);
        for (int t = 1; t <= i; ++t) w.vals[t - 1] = ci * (i + 1 - t);
      }
      break;
    }
    case Family::UnimodalFixed: {
      const int len = id.j - id.i + 1;
      w.lo = id.i - 1;
      w.vals.assign(len, 1.0 / len);
      break;
    }
  }
  return w;
}

Vec vertex_vector(const ShapeConstraint& c, VertexId id) {
  const VertexWindow w = vertex_window(c, id);
  Vec v(c.dim, 0.0);
  for (std::size_t t = 0; t < w.vals.size(); ++t) v[w.lo + t] = w.vals[t];
  return v;
}

double vertex_dot(const ShapeConstraint& c, VertexId id, const Vec& g) {
  const VertexWindow w = vertex_window(c, id);
  double acc = 0.0;
  for (std::size_t t = 0; t < w.vals.size(); ++t) acc += w.vals[t] * g[w.lo + t];
  return acc;
}

namespace {

struct Best {
  double value = std::numeric_limits<double>::infinity();
  VertexId id{};
  void consider(double v, VertexId id_) {
    if (v < value) {
      value = v;
      id = id_;
    }
  }
};

}  // namespace

OracleResult lp_oracle(const ShapeConstraint& c, const Vec& g, long long* ops) {
  check_constraint(c);
  const int M = c.dim;
  if (static_cast<int>(g.size()) != M)
    throw std::invalid_argument("lp_oracle: dimension mismatch");
  long long count = 0;
  Best best;

  if (M == 1) {
    best.consider(g[0], vertex_id_at(c, 0));
    if (ops) *ops += 1;
    return {best.id, best.value};
  }

  // 1-based prefix sums of g and of i*g_i.
  auto prefix = [&](Vec& P) {
    P.assign(M + 1, 0.0);
    for (int i = 1; i <= M; ++i) {
      P[i] = P[i - 1] + g[i - 1];
      ++count;
    }
  };
  auto weighted_prefix = [&](Vec& W) {
    W.assign(M + 1, 0.0);
    for (int i = 1; i <= M; ++i) {
      W[i] = W[i - 1] + static_cast<double>(i) * g[i - 1];
      ++count;
    }
  };

  switch (c.family) {
    case Family::Simplex: {
      for (int i = 1; i <= M; ++i) {
        best.consider(g[i - 1], {i, 0});
        ++count;
      }
      break;
    }
    case Family::Decreasing: {
      double p = 0.0;
      for (int i = 1; i <= M; ++i) {
        p += g[i - 1];
        best.consider(p / i, {i, 0});
        ++count;
      }
      break;
    }
    case Family::Increasing: {
      Vec P;
      prefix(P);
      for (int i = 1; i <= M; ++i) {
        best.consider((P[M] - P[i - 1]) / (M - i + 1), {i, 0});
        ++count;
      }
      break;
    }
    case Family::Concave: {
      Vec P, W;
      prefix(P);
      weighted_prefix(W);
      const double cM = 2.0 / (static_cast<double>(M) * (M - 1));
      best.consider(cM * (W[M] - P[M]), {1, 0});
      for (int j = 2; j <= M - 1; ++j) {
        const double pj = 2.0 / (static_cast<double>(M - 1) * (j - 1));
        const double qj = 2.0 / (static_cast<double>(M - 1) * (M - j));
        const double A = W[j] - P[j];
        const double D = M * (P[M - 1] - P[j]) - (W[M - 1] - W[j]);
        best.consider(pj * A + qj * D, {j, 0});
        ++count;
      }
      best.consider(cM * (M * P[M] - W[M]), {M, 0});
      count += 2;
      break;
    }
    case Family::Convex: {
      Vec P;
      prefix(P);
      // left ramps: S_{k+1} = S_k + suffix sum of g over the support
      double s = g[M - 1];
      for (int k = 1; k <= M - 1; ++k) {
        const double ak = 0.5 * static_cast<double>(k) * (k + 1);
        best.consider(s / ak, {k, 0});
        s += P[M] - P[M - k - 1];
        ++count;
      }
      // right ramps: S_{k+1} = S_k + P[k+1]
      s = g[0];
      for (int k = 1; k <= M - 1; ++k) {
        const double ak = 0.5 * static_cast<double>(k) * (k + 1);
        best.consider(s / ak, {k, 1});
        s += P[k + 1];
        ++count;
      }
      break;
    }
    case Family::ConcaveIncreasing: {
      Vec P, W;
      prefix(P);
      weighted_prefix(W);
      best.consider(P[M] / M, {1, 0});
      for (int i = 2; i <= M; ++i) {
        const double ri = 2.0 / (static_cast<double>(2 * M - i) * (i - 1));
        const double val = ri * ((W[i] - P[i]) + (i - 1) * (P[M] - P[i]));
        best.consider(val, {i, 0});
        ++count;
      }
      break;
    }
    case Family::ConcaveDecreasing: {
      Vec P, W;
      prefix(P);
      weighted_prefix(W);
      best.consider(P[M] / M, {1, 0});
      for (int i = 2; i <= M; ++i) {
        const double ri = 2.0 / (static_cast<double>(2 * M - i) * (i - 1));
        const double tail = M * (P[M] - P[M - i]) - (W[M] - W[M - i]);
        best.consider(ri * ((i - 1) * P[M - i] + tail), {i, 0});
        ++count;
      }
      break;
    }
    case Family::ConvexIncreasing: {
      Vec P, W;
      prefix(P);
      weighted_prefix(W);
      for (int i = 1; i <= M - 1; ++i) {
        const double ci = 2.0 / (static_cast<double>(i) * (i + 1));
        const double val =
            ci * ((W[M] - W[M - i]) - (M - i) * (P[M] - P[M - i]));
        best.consider(val, {i, 0});
        ++count;
      }
      best.consider(P[M] / M, {M, 0});
      break;
    }
    case Family::ConvexDecreasing: {
      Vec P, W;
      prefix(P);
      weighted_prefix(W);
      for (int i = 1; i <= M - 1; ++i) {
        const double ci = 2.0 / (static_cast<double>(i) * (i + 1));
        best.consider(ci * ((i + 1) * P[i] - W[i]), {i, 0});
        ++count;
      }
      best.consider(P[M] / M, {M, 0});
      break;
    }
    case Family::UnimodalFixed: {
      Vec P;
      prefix(P);
      const int k = c.mode;
      for (int k1 = 1; k1 <= k; ++k1)
        for (int k2 = k; k2 <= M; ++k2) {
          best.consider((P[k2] - P[k1 - 1]) / (k2 - k1 + 1), {k1, k2});
          ++count;
        }
      break;
    }
  }
  if (ops) *ops += count;
  return {best.id, best.value};
}

VertexId away_oracle(const ShapeConstraint& c,
                     const std::vector<std::pair<VertexId, double>>& active,
                     const Vec& g) {
  check_constraint(c);
  if (active.empty())
    throw std::invalid_argument("away_oracle: empty active set");
  double wsum = 0.0;
  for (const auto& [id, lam] : active) {
    if (!(lam > 0.0))
      throw std::invalid_argument("away_oracle: nonpositive active weight");
    wsum += lam;
  }
  if (std::abs(wsum - 1.0) > 1e-10)
    throw std::invalid_argument("away_oracle: active weights do not sum to 1");

  double bestval = -std::numeric_limits<double>::infinity();
  long bestord = -1;
  VertexId bestid{};
  for (const auto& [id, lam] : active) {
    const double v = vertex_dot(c, id, g);
    const long ord = catalog_ordinal(c, id);
    if (v > bestval || (v == bestval && ord < bestord)) {
      bestval = v;
      bestord = ord;
      bestid = id;
    }
  }
  return bestid;
}

bool membership(const ShapeConstraint& c, const Vec& w, double tol) {
  check_constraint(c);
  const int M = c.dim;
  if (static_cast<int>(w.size()) != M) return false;
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= -tol)) return false;
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol) return false;

  auto increasing = [&](int from, int to) {  // w[from..to] nondecreasing
    for (int i = from; i < to; ++i)
      if (w[i] > w[i + 1] + tol) return false;
    return true;
  };
  auto decreasing = [&](int from, int to) {
    for (int i = from; i < to; ++i)
      if (w[i] + tol < w[i + 1]) return false;
    return true;
  };
  auto concave = [&]() {
    for (int i = 1; i + 1 < M; ++i)
      if (2.0 * w[i] + tol < w[i - 1] + w[i + 1]) return false;
    return true;
  };
  auto convex = [&]() {
    for (int i = 1; i + 1 < M; ++i)
      if (2.0 * w[i] > w[i - 1] + w[i + 1] + tol) return false;
    return true;
  };

  switch (c.family) {
    case Family::Simplex: return true;
    case Family::Decreasing: return decreasing(0, M - 1);
    case Family::Increasing: return increasing(0, M - 1);
    case Family::Concave: return concave();
    case Family::Convex: return convex();
    case Family::ConcaveIncreasing: return concave() && increasing(0, M - 1);
    case Family::ConcaveDecreasing: return concave() && decreasing(0, M - 1);
    case Family::ConvexIncreasing: return convex() && increasing(0, M - 1);
    case Family::ConvexDecreasing: return convex() && decreasing(0, M - 1);
    case Family::UnimodalFixed:
      return increasing(0, c.mode - 1) && decreasing(c.mode - 1, M - 1);
  }
  return false;
}

std::vector<Vec> enumerate_vertices(const ShapeConstraint& c) {
  const long n = catalog_size(c);
  std::vector<Vec> out;
  out.reserve(n);
  for (long ord = 0; ord < n; ++ord)
    out.push_back(vertex_vector(c, vertex_id_at(c, ord)));
  return out;
}

}  // namespace shapemix
