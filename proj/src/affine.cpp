#include "bilin/affine.hpp"

#include "bilin/error.hpp"

#include <algorithm>
#include <chrono>

namespace bilin {

LpProblem build_affine_lp(const ArInstance& inst) {
  const CoordinateMaxima gamma = coordinate_maxima(inst.u());
  require(gamma.first_unbounded() < 0, ErrorCode::kUnboundedCoordinate,
          "gamma_" + std::to_string(gamma.first_unbounded()) + " is unbounded");

  const AffineLayout lay{inst.n(), inst.m(), inst.uncertainty_rows()};
  const Index n = lay.n, m = lay.m, lr = lay.lr;
  const Matrix& a = inst.a();
  const Matrix& b = inst.b();
  const Matrix& r = inst.u().matrix();
  const Vector& rhs = inst.u().rhs();

  LpProblem lp = LpProblem::create(Sense::kMinimize, lay.cols(), lay.rows());
  lp.objective[lay.t()] = 1.0;
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < m; ++k) lp.lower[lay.y(j, k)] = -kInf;
  }

  Index row = 0;
  // (a) covering rows.
  for (Index i = 0; i < m; ++i) {
    for (Index l = 0; l < lr; ++l) lp.rows(row, lay.lambda(i, l)) = rhs[l];
    for (Index j = 0; j < n; ++j) {
      lp.rows(row, lay.x(j)) = -a(i, j);
      lp.rows(row, lay.y0(j)) = -b(i, j);
    }
    lp.set_row(row++, RowRelation::kLessEqual, 0.0);
    for (Index k = 0; k < m; ++k) {
      for (Index l = 0; l < lr; ++l) lp.rows(row, lay.lambda(i, l)) = r(l, k);
      for (Index j = 0; j < n; ++j) lp.rows(row, lay.y(j, k)) = b(i, j);
      lp.set_row(row++, RowRelation::kGreaterEqual, i == k ? 1.0 : 0.0);
    }
  }
  // (b) nonnegativity of the policy.
  for (Index j = 0; j < n; ++j) {
    for (Index l = 0; l < lr; ++l) lp.rows(row, lay.mu(j, l)) = rhs[l];
    lp.rows(row, lay.y0(j)) = -1.0;
    lp.set_row(row++, RowRelation::kLessEqual, 0.0);
    for (Index k = 0; k < m; ++k) {
      for (Index l = 0; l < lr; ++l) lp.rows(row, lay.mu(j, l)) = r(l, k);
      lp.rows(row, lay.y(j, k)) = 1.0;
      lp.set_row(row++, RowRelation::kGreaterEqual, 0.0);
    }
  }
  // (c) worst-case cost epigraph.
  for (Index k = 0; k < m; ++k) {
    for (Index l = 0; l < lr; ++l) lp.rows(row, lay.nu(l)) = r(l, k);
    for (Index j = 0; j < n; ++j) lp.rows(row, lay.y(j, k)) = -inst.d()[j];
    lp.set_row(row++, RowRelation::kGreaterEqual, 0.0);
  }
  lp.rows(row, lay.t()) = 1.0;
  for (Index j = 0; j < n; ++j) {
    lp.rows(row, lay.x(j)) = -inst.c()[j];
    lp.rows(row, lay.y0(j)) = -inst.d()[j];
  }
  for (Index l = 0; l < lr; ++l) lp.rows(row, lay.nu(l)) = -rhs[l];
  lp.set_row(row++, RowRelation::kGreaterEqual, 0.0);
  return lp;
}

AffinePolicy solve_affine(const ArInstance& inst, const SolverTolerances& tol) {
  const auto start = std::chrono::steady_clock::now();
  const LpSolution s = solve_lp(build_affine_lp(inst), tol);
  const auto stop = std::chrono::steady_clock::now();
  require(s.status != LpStatus::kInfeasible, ErrorCode::kModelError,
          "affine counterpart is infeasible: no affine policy covers U");
  require(s.status != LpStatus::kUnbounded, ErrorCode::kModelError, "affine counterpart is unbounded");

  const AffineLayout lay{inst.n(), inst.m(), inst.uncertainty_rows()};
  AffinePolicy p;
  p.x = s.primal.segment(0, lay.n);
  p.y0 = s.primal.segment(lay.n, lay.n);
  p.y.resize(lay.n, lay.m);
  for (Index j = 0; j < lay.n; ++j) {
    for (Index k = 0; k < lay.m; ++k) p.y(j, k) = s.primal[lay.y(j, k)];
  }
  p.z_aff = s.objective;
  p.seconds = std::chrono::duration<double>(stop - start).count();
  p.lp_iterations = s.iterations;
  return p;
}

double affine_realized_cost(const ArInstance& inst, const AffinePolicy& policy, const Vector& h) {
  return inst.c().dot(policy.x) + inst.d().dot(policy.y0 + policy.y * h);
}

double affine_violation(const ArInstance& inst, const AffinePolicy& policy, const Vector& h) {
  require(h.size() == inst.m(), ErrorCode::kDimensionMismatch, "scenario must have length m");
  const Vector rec = policy.y0 + policy.y * h;
  const Vector slack = inst.b() * rec - (h - inst.a() * policy.x);
  double v = -slack.minCoeff();
  v = std::max(v, -rec.minCoeff());
  v = std::max(v, affine_realized_cost(inst, policy, h) - policy.z_aff);
  return v;
}

}  // namespace bilin
