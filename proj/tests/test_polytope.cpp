#include "bilin/error.hpp"
#include "bilin/polytope.hpp"
#include "bilin/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace bilin;

namespace {

PackingPolytope knapsack_x() {
  Matrix m(1, 2);
  m << 1.0, 2.0;
  return PackingPolytope(m, Vector::Constant(1, 2.0));
}

bool has_vertex(const std::vector<Vector>& vs, std::initializer_list<double> coords) {
  Vector target(static_cast<Index>(coords.size()));
  Index i = 0;
  for (double c : coords) target[i++] = c;
  return std::any_of(vs.begin(), vs.end(), [&](const Vector& v) { return (v - target).norm() < 1e-12; });
}

PackingPolytope random_packing(Stream& rng, Index rows, Index dim) {
  Matrix m(rows, dim);
  Vector b(rows);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < dim; ++j) m(i, j) = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
    b[i] = 0.5 + rng.uniform();
  }
  // Every column needs a positive entry to keep the maxima finite.
  for (Index j = 0; j < dim; ++j) {
    if (m.col(j).maxCoeff() == 0.0) m(0, j) = 0.5;
  }
  return PackingPolytope(m, b);
}

}  // namespace

TEST(PackingPolytope, RejectsNegativeDataUnlessSigned) {
  Matrix m(1, 1);
  m << -1.0;
  EXPECT_THROW(PackingPolytope(m, Vector::Ones(1)), Error);
  EXPECT_NO_THROW(PackingPolytope(m, Vector::Ones(1), PackingPolytope::MatrixSign::kSigned));
  EXPECT_THROW(PackingPolytope(Matrix::Ones(1, 1), -Vector::Ones(1)), Error);
  EXPECT_THROW(PackingPolytope(Matrix::Ones(2, 1), Vector::Ones(1)), Error);
}

TEST(CoordinateMaxima, Examples) {
  const auto single = coordinate_maxima(PackingPolytope(Matrix::Ones(1, 1), Vector::Constant(1, 2.0)));
  EXPECT_DOUBLE_EQ(single.values[0], 2.0);

  Matrix forced(2, 2);
  forced << 1.0, 0.0, 0.0, 3.0;
  Vector rhs(2);
  rhs << 1.0, 0.0;
  const auto zero = coordinate_maxima(PackingPolytope(forced, rhs));
  EXPECT_DOUBLE_EQ(zero.values[1], 0.0);

  const auto theta = coordinate_maxima(knapsack_x());
  EXPECT_NEAR(theta.values[0], 2.0, 1e-12);
  EXPECT_NEAR(theta.values[1], 1.0, 1e-12);
  EXPECT_TRUE(theta.all_finite());
}

TEST(CoordinateMaxima, UnboundedCoordinateIsMarked) {
  Matrix m(1, 2);
  m << 1.0, 0.0;
  const auto cm = coordinate_maxima(PackingPolytope(m, Vector::Ones(1)));
  EXPECT_TRUE(cm.finite[0]);
  EXPECT_FALSE(cm.finite[1]);
  EXPECT_EQ(cm.first_unbounded(), 1);

  // Signed dual-feasible set: z1 - z2 <= 1 leaves both coordinates unbounded.
  Matrix s(1, 2);
  s << 1.0, -1.0;
  const auto signed_cm = coordinate_maxima(PackingPolytope(s, Vector::Ones(1), PackingPolytope::MatrixSign::kSigned));
  EXPECT_FALSE(signed_cm.all_finite());
}

TEST(CoordinateMaxima, ScalesWithRhs) {
  Stream rng(Stream(5).split("poly-scale"));
  for (int t = 0; t < 20; ++t) {
    const PackingPolytope p = random_packing(rng, 3, 4);
    const double lambda = 0.25 + 3.0 * rng.uniform();
    const auto a = coordinate_maxima(p);
    const auto b = coordinate_maxima(PackingPolytope(p.matrix(), lambda * p.rhs()));
    for (Index i = 0; i < p.dim(); ++i) EXPECT_NEAR(b.values[i], lambda * a.values[i], 1e-9 * (1 + b.values[i]));
  }
}

TEST(Contains, Examples) {
  const auto x = knapsack_x();
  EXPECT_TRUE(contains(x, Vector::Unit(2, 0) * 2.0, 1e-9));
  Vector p(2);
  p << 2.0, 0.1;
  EXPECT_FALSE(contains(x, p, 1e-9));
  p << 1.0, 0.5 + 1e-12;
  EXPECT_TRUE(contains(x, p, 1e-9));
  p << -1e-6, 0.0;
  EXPECT_FALSE(contains(x, p, 1e-9));
  EXPECT_THROW(contains(x, Vector::Zero(3), 1e-9), Error);
}

TEST(EnumerateVertices, Examples) {
  const auto v = enumerate_vertices(knapsack_x());
  ASSERT_EQ(v.size(), 3u);
  EXPECT_TRUE(has_vertex(v, {0, 0}));
  EXPECT_TRUE(has_vertex(v, {2, 0}));
  EXPECT_TRUE(has_vertex(v, {0, 1}));

  EXPECT_EQ(enumerate_vertices(PackingPolytope::box(2)).size(), 4u);

  Matrix u(3, 2);
  u << 1, 0, 0, 1, 1, 1;
  const auto uv = enumerate_vertices(PackingPolytope(u, Vector::Ones(3)));
  ASSERT_EQ(uv.size(), 3u);
  EXPECT_TRUE(has_vertex(uv, {0, 0}));
  EXPECT_TRUE(has_vertex(uv, {1, 0}));
  EXPECT_TRUE(has_vertex(uv, {0, 1}));
}

TEST(EnumerateVertices, CapIsEnforced) {
  EnumerationOptions opts;
  opts.cap = 5;
  try {
    enumerate_vertices(PackingPolytope::box(3), opts);  // C(6,3) = 20 candidates
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEnumerationTooLarge);
  }
  EXPECT_EQ(binomial(6, 3), 20u);
  EXPECT_EQ(binomial(200, 100), UINT64_MAX);
}

TEST(EnumerateVerticesProperty, VerticesAreMembersAndAttainMaxima) {
  Stream rng(Stream(11).split("poly-vertices"));
  for (int t = 0; t < 40; ++t) {
    const Index rows = 1 + static_cast<Index>(rng.uniform() * 4);
    const Index dim = 1 + static_cast<Index>(rng.uniform() * 4);
    const PackingPolytope p = random_packing(rng, rows, dim);
    const auto verts = enumerate_vertices(p);
    const auto serial = enumerate_vertices_serial(p);
    ASSERT_EQ(verts.size(), serial.size());
    for (std::size_t k = 0; k < verts.size(); ++k) EXPECT_TRUE(verts[k] == serial[k]);

    const auto cm = coordinate_maxima(p);
    Vector best = Vector::Zero(dim);
    for (const auto& v : verts) {
      EXPECT_TRUE(contains(p, v, 1e-9));
      best = best.cwiseMax(v);
      // Packing closure along the segment to the origin.
      const double lambda = rng.uniform();
      EXPECT_TRUE(contains(p, lambda * v, 1e-9));
    }
    for (Index i = 0; i < dim; ++i) EXPECT_NEAR(best[i], cm.values[i], 1e-7);
    for (std::size_t a = 0; a < verts.size(); ++a)
      for (std::size_t b = a + 1; b < verts.size(); ++b)
        EXPECT_GT((verts[a] - verts[b]).lpNorm<Eigen::Infinity>(), 1e-8);
  }
}
