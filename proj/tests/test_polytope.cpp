#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "shapemix/kernels.hpp"
#include "shapemix/polytope.hpp"
#include "shapemix/reference.hpp"
#include "shapemix/rng.hpp"
#include "test_util.hpp"

using namespace shapemix;

namespace {

const Family kAll[] = {
    Family::Simplex,          Family::Decreasing,
    Family::Increasing,       Family::Concave,
    Family::Convex,           Family::ConcaveIncreasing,
    Family::ConcaveDecreasing, Family::ConvexIncreasing,
    Family::ConvexDecreasing, Family::UnimodalFixed,
};

ShapeConstraint make(Family f, int M) {
  return f == Family::UnimodalFixed
             ? ShapeConstraint::unimodal_fixed(M, std::max(1, (M + 1) / 2))
             : ShapeConstraint::make(f, M);
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool close(const Vec& a, const Vec& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("vertex vectors on the worked examples") {
  CHECK(close(vertex_vector(make(Family::Decreasing, 3), {3, 0}),
              {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1e-15));
  CHECK(close(vertex_vector(make(Family::Concave, 3), {2, 0}), {0, 1, 0},
              1e-15));
  CHECK(close(vertex_vector(ShapeConstraint::unimodal_fixed(3, 2), {1, 3}),
              {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1e-15));
  CHECK_THROWS_AS(vertex_vector(make(Family::Decreasing, 3), {4, 0}),
                  std::invalid_argument);
}

TEST_CASE("catalog enumeration sizes and contents") {
  CHECK(enumerate_vertices(make(Family::Simplex, 2)) ==
        std::vector<Vec>{{1.0, 0.0}, {0.0, 1.0}});

  const auto um = enumerate_vertices(ShapeConstraint::unimodal_fixed(3, 2));
  REQUIRE(um.size() == 4);
  CHECK(close(um[0], {0.5, 0.5, 0.0}, 1e-15));
  CHECK(close(um[1], {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1e-15));
  CHECK(close(um[2], {0.0, 1.0, 0.0}, 1e-15));
  CHECK(close(um[3], {0.0, 0.5, 0.5}, 1e-15));

  // the printed convex catalog counts the two full ramps, which fail the
  // M-active-constraints test; the corrected catalog keeps 2(M-1)
  CHECK(enumerate_vertices(make(Family::Convex, 3)).size() == 4);
  CHECK(catalog_size(make(Family::Convex, 8)) == 14);

  for (Family f : kAll)
    for (int M : {1, 2, 3, 6}) {
      if (f == Family::UnimodalFixed && M < 1) continue;
      const auto cat = enumerate_vertices(make(f, M));
      CHECK(static_cast<long>(cat.size()) == catalog_size(make(f, M)));
      // no duplicates
      for (std::size_t a = 0; a < cat.size(); ++a)
        for (std::size_t b = a + 1; b < cat.size(); ++b)
          CHECK(!close(cat[a], cat[b], 1e-12));
    }

  for (int M : {2, 5, 9})
    for (int k = 1; k <= M; ++k)
      CHECK(catalog_size(ShapeConstraint::unimodal_fixed(M, k)) ==
            static_cast<long>(k) * (M - k + 1));
}

TEST_CASE("every catalog vertex is feasible and sums to one") {
  for (Family f : kAll)
    for (int M : {1, 2, 3, 4, 7, 12, 33}) {
      const auto c = make(f, M);
      for (long ord = 0; ord < catalog_size(c); ++ord) {
        const Vec v = vertex_vector(c, vertex_id_at(c, ord));
        CHECK(membership(c, v, 1e-12));
        kernels::CompensatedSum cs;
        for (double x : v) cs.add(x);
        CHECK(std::abs(cs.value() - 1.0) <= 1e-14);
      }
    }
}

TEST_CASE("lp oracle on the worked examples") {
  {
    const auto r = lp_oracle(make(Family::Simplex, 3), {3, 1, 2});
    CHECK(r.id == VertexId{2, 0});
    CHECK(r.value == 1.0);
  }
  {
    const auto r = lp_oracle(make(Family::Decreasing, 3), {0, 0, -3});
    CHECK(r.id == VertexId{3, 0});
    CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-15));
  }
  {
    const auto r = lp_oracle(make(Family::Concave, 3), {1, 0, 1});
    CHECK(r.id == VertexId{2, 0});
    CHECK(r.value == doctest::Approx(0.0).epsilon(1e-15));
  }
  {
    // tie between (1,0,0) and (0,0,1); catalog order picks the left side
    const auto r = lp_oracle(make(Family::Convex, 3), {0, 1, 0});
    CHECK(r.id == VertexId{1, 0});
    CHECK(close(vertex_vector(make(Family::Convex, 3), r.id), {0, 0, 1},
                1e-15));
    CHECK(r.value == 0.0);
  }
}

TEST_CASE("lp oracle equals the catalog minimum on random inputs") {
  CounterRng rng(111);
  for (Family f : kAll) {
    for (int M = 3; M <= 10; ++M) {
      const auto c = make(f, M);
      const auto cat = enumerate_vertices(c);
      for (int trial = 0; trial < 100; ++trial) {
        Vec g(M);
        for (double& x : g) x = rng.next_normal();
        const auto r = lp_oracle(c, g);
        double best = std::numeric_limits<double>::infinity();
        for (const Vec& v : cat) best = std::min(best, dot(v, g));
        CHECK(std::abs(r.value - best) <= 1e-12);
        CHECK(std::abs(dot(vertex_vector(c, r.id), g) - r.value) <= 1e-12);
      }
    }
  }
}

TEST_CASE("catalog equals brute-force vertex enumeration for M <= 5") {
  for (Family f : kAll) {
    for (int M : {3, 4, 5}) {
      std::vector<ShapeConstraint> cs;
      if (f == Family::UnimodalFixed) {
        for (int k = 1; k <= M; ++k)
          cs.push_back(ShapeConstraint::unimodal_fixed(M, k));
      } else {
        cs.push_back(ShapeConstraint::make(f, M));
      }
      for (const auto& c : cs) {
        auto cat = enumerate_vertices(c);
        auto ref = brute_force_vertices(c);
        REQUIRE(cat.size() == ref.size());
        std::vector<bool> used(ref.size(), false);
        for (const Vec& v : cat) {
          bool matched = false;
          for (std::size_t i = 0; i < ref.size(); ++i)
            if (!used[i] && close(v, ref[i], 1e-10)) {
              used[i] = true;
              matched = true;
              break;
            }
          CHECK(matched);
        }
      }
    }
  }
}

TEST_CASE("away oracle on the worked examples") {
  const auto simplex3 = make(Family::Simplex, 3);
  CHECK(away_oracle(simplex3, {{{2, 0}, 1.0}}, {5, 1, 1}) == VertexId{2, 0});
  CHECK(away_oracle(simplex3, {{{1, 0}, 0.5}, {{2, 0}, 0.5}}, {3, 1, 2}) ==
        VertexId{1, 0});

  const auto dec3 = make(Family::Decreasing, 3);
  CHECK(away_oracle(dec3, {{{1, 0}, 0.5}, {{3, 0}, 0.5}}, {0, 0, -3}) ==
        VertexId{1, 0});

  CHECK_THROWS_AS(away_oracle(simplex3, {}, {1, 1, 1}),
                  std::invalid_argument);
}

TEST_CASE("membership checks") {
  CHECK(membership(make(Family::Concave, 3), {0, 1, 0}, 1e-12));
  CHECK(!membership(make(Family::Decreasing, 3), {0.2, 0.3, 0.5}, 1e-12));
  CHECK(membership(make(Family::ConvexIncreasing, 3),
                   {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1e-12));
  CHECK(!membership(make(Family::Simplex, 3), {0.5, 0.2, 0.2}, 1e-12));
  CHECK(membership(ShapeConstraint::unimodal_fixed(4, 2), {0.1, 0.4, 0.3, 0.2},
                   1e-12));
  CHECK(!membership(ShapeConstraint::unimodal_fixed(4, 2), {0.4, 0.1, 0.3, 0.2},
                    1e-12));
}

TEST_CASE("oracle operation counts scale linearly in M") {
  CounterRng rng(222);
  for (Family f : {Family::Decreasing, Family::Increasing, Family::Concave,
                   Family::Convex, Family::ConcaveIncreasing,
                   Family::ConcaveDecreasing, Family::ConvexIncreasing,
                   Family::ConvexDecreasing}) {
    long long ops_small = 0, ops_big = 0;
    {
      const int M = 1000;
      Vec g(M);
      for (double& x : g) x = rng.next_normal();
      lp_oracle(make(f, M), g, &ops_small);
    }
    {
      const int M = 10000;
      Vec g(M);
      for (double& x : g) x = rng.next_normal();
      lp_oracle(make(f, M), g, &ops_big);
    }
    CHECK(static_cast<double>(ops_big) / ops_small <= 10.5);
  }

  // unimodal: the count tracks k(M-k+1)
  {
    const int M = 200, k = 100;
    long long ops = 0;
    Vec g(M);
    for (double& x : g) x = rng.next_normal();
    lp_oracle(ShapeConstraint::unimodal_fixed(M, k), g, &ops);
    const double windows = static_cast<double>(k) * (M - k + 1);
    CHECK(ops <= 2.0 * windows);
    CHECK(ops >= windows);
  }
}

TEST_CASE("tie-breaking is deterministic toward the smallest catalog id") {
  // constant g makes every simplex vertex optimal
  const auto r = lp_oracle(make(Family::Simplex, 5), {2, 2, 2, 2, 2});
  CHECK(r.id == VertexId{1, 0});
  // away ties resolve the same way
  const auto a = away_oracle(make(Family::Simplex, 5),
                             {{{2, 0}, 0.5}, {{4, 0}, 0.5}}, {1, 1, 1, 1, 1});
  CHECK(a == VertexId{2, 0});
}

TEST_CASE("vertex ordinal round trip") {
  for (Family f : kAll)
    for (int M : {1, 2, 5, 9}) {
      const auto c = make(f, M);
      for (long ord = 0; ord < catalog_size(c); ++ord) {
        const VertexId id = vertex_id_at(c, ord);
        CHECK(catalog_ordinal(c, id) == ord);
      }
    }
}
