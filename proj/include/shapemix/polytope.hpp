#pragma once

#include <string>
#include <utility>
#include <vector>

#include "shapemix/basis.hpp"

namespace shapemix {

// The nine polyhedral families: each is the unit simplex intersected
// with a shape restriction on the coefficient sequence.
enum class Family {
  Simplex,
  Decreasing,
  Increasing,
  Concave,
  Convex,
  ConcaveIncreasing,
  ConcaveDecreasing,
  ConvexIncreasing,
  ConvexDecreasing,
  UnimodalFixed,
};

struct ShapeConstraint {
  Family family = Family::Simplex;
  int dim = 0;   // M
  int mode = 0;  // unimodal_fixed only: mode index in [1, M]

  static ShapeConstraint simplex(int M) { return {Family::Simplex, M, 0}; }
  static ShapeConstraint make(Family f, int M, int mode = 0);
  static ShapeConstraint unimodal_fixed(int M, int mode) {
    return make(Family::UnimodalFixed, M, mode);
  }
};

const char* family_name(Family f);

// Structured vertex index, 1-based to match the catalog descriptions.
//   simplex, monotone, concave, monotone-combination families: {i, 0}
//   convex: {k, side} with side 0 = left ramp (zeros first, then
//           1..k scaled), side 1 = right ramp (mirrored)
//   unimodal_fixed: {k1, k2}, the uniform window [k1, k2]
//
// Catalog order: families indexed by i list ids 1..M in order; convex
// lists all left-side ids (ascending k) before all right-side ids;
// unimodal lists ascending k1, then ascending k2.  Ties in the oracles
// break toward the smallest catalog position.
struct VertexId {
  int i = 0;
  int j = 0;
  friend bool operator==(const VertexId& a, const VertexId& b) {
    return a.i == b.i && a.j == b.j;
  }
};

// Dense values on the contiguous support [lo, lo+vals.size()), 0-based.
struct VertexWindow {
  int lo = 0;
  std::vector<double> vals;
};

long catalog_size(const ShapeConstraint& c);
long catalog_ordinal(const ShapeConstraint& c, VertexId id);
VertexId vertex_id_at(const ShapeConstraint& c, long ordinal);

VertexWindow vertex_window(const ShapeConstraint& c, VertexId id);
Vec vertex_vector(const ShapeConstraint& c, VertexId id);

double vertex_dot(const ShapeConstraint& c, VertexId id, const Vec& g);

struct OracleResult {
  VertexId id;
  double value = 0.0;
};

// min_{w in C} <g, w> via the closed-form catalogs; O(M) for all
// families except unimodal_fixed, which is O(k(M-k+1)).  When ops is
// non-null the inner-loop step count is accumulated into it.
OracleResult lp_oracle(const ShapeConstraint& c, const Vec& g,
                       long long* ops = nullptr);

// argmax over the active vertices of <g, v>; ties toward the smallest
// catalog position.
VertexId away_oracle(const ShapeConstraint& c,
                     const std::vector<std::pair<VertexId, double>>& active,
                     const Vec& g);

bool membership(const ShapeConstraint& c, const Vec& w, double tol);

// Full catalog in documented order; intended for M <= 64.
std::vector<Vec> enumerate_vertices(const ShapeConstraint& c);

}  // namespace shapemix
