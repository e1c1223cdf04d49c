#include "ar_fixtures.hpp"
#include "bilin/affine.hpp"
#include "bilin/oracle.hpp"
#include "bilin/rng.hpp"

#include <gtest/gtest.h>

using namespace bilin;

TEST(AffineLayout, Counts) {
  EXPECT_EQ(affine_variable_count(20, 20, 40), 2081);
  EXPECT_EQ(lp_ar_variable_count(20, 40), 100);
  const AffineLayout lay{20, 20, 120};
  EXPECT_EQ(lay.rows(), 861);
  EXPECT_EQ(lay.cols(), 20 + 20 + 400 + 41 * 120 + 1);
  // Blocks tile the columns without gaps.
  EXPECT_EQ(lay.y(0, 0), lay.y0(19) + 1);
  EXPECT_EQ(lay.lambda(0, 0), lay.y(19, 19) + 1);
  EXPECT_EQ(lay.mu(0, 0), lay.lambda(19, 119) + 1);
  EXPECT_EQ(lay.nu(0), lay.mu(19, 119) + 1);
  EXPECT_EQ(lay.t(), lay.nu(119) + 1);
}

TEST(BuildAffineLp, ShapeMatchesLayout) {
  Stream rng(Stream(17).split("aff-shape"));
  const auto inst = fixtures::small_ar_instance(rng, 3, 2);
  const LpProblem lp = build_affine_lp(inst);
  const AffineLayout lay{3, 3, 5};
  EXPECT_EQ(lp.num_cols(), lay.cols());
  EXPECT_EQ(lp.num_rows(), lay.rows());
  EXPECT_EQ(lp.lower[lay.y(1, 2)], -kInf);
  EXPECT_EQ(lp.lower[lay.lambda(0, 0)], 0.0);
  EXPECT_NO_THROW(lp.validate());
}

TEST(SolveAffine, OneDimExample) {
  const auto p = solve_affine(fixtures::one_dim_instance());
  EXPECT_NEAR(p.z_aff, 1.0, 1e-9);
  EXPECT_GE(p.seconds, 0.0);
  for (double h : {0.0, 0.5, 1.0}) {
    EXPECT_LE(affine_violation(fixtures::one_dim_instance(), p, Vector::Constant(1, h)), 1e-9);
  }
}

TEST(SolveAffine, ZeroRecourseCost) {
  Stream rng(Stream(18).split("aff-zero"));
  const auto base = fixtures::small_ar_instance(rng, 3, 2, true);
  const ArInstance inst(base.a(), base.b(), base.c(), Vector::Zero(3), base.u());
  EXPECT_NEAR(solve_affine(inst).z_aff, 0.0, 1e-9);
}

TEST(SolveAffineProperty, VertexCertificationAndDominance) {
  Stream rng(Stream(19).split("aff-certify"));
  for (int t = 0; t < 20; ++t) {
    const Index n = 1 + static_cast<Index>(rng.uniform() * 4);
    const auto inst = fixtures::small_ar_instance(rng, n, 1 + static_cast<Index>(rng.uniform() * 3));
    const auto p = solve_affine(inst);
    double worst = -kInf;
    for (const auto& h : enumerate_vertices(inst.u())) {
      EXPECT_LE(affine_violation(inst, p, h), 1e-6);
      worst = std::max(worst, affine_realized_cost(inst, p, h));
    }
    EXPECT_GE(p.z_aff, worst - 1e-6);
    EXPECT_NEAR(p.z_aff, worst, 1e-6 * (1 + worst));  // the bound is attained at a vertex
    // Affine recourse is a restriction of full adjustability for the same x.
    EXPECT_GE(p.z_aff, evaluate_first_stage(inst, p.x) - 1e-6);
  }
}
