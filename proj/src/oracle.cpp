#include "bilin/oracle.hpp"

#include "bilin/error.hpp"

#include <algorithm>

namespace bilin {

namespace {

double best_pair(const std::vector<Vector>& xs, const std::vector<Vector>& ys, long i) {
  double best = -kInf;
  for (const auto& y : ys) best = std::max(best, xs[static_cast<std::size_t>(i)].dot(y));
  return best;
}

}  // namespace

double exact_pdb(const PdbInstance& inst, const EnumerationOptions& opts) {
  const auto xs = enumerate_vertices(inst.x_set(), opts);
  const auto ys = enumerate_vertices(inst.y_set(), opts);
  const long nx = static_cast<long>(xs.size());
  double best = -kInf;
  // max is exact, so the reduction order cannot change the result.
#pragma omp parallel for reduction(max : best) schedule(static)
  for (long i = 0; i < nx; ++i) best = std::max(best, best_pair(xs, ys, i));
  return best;
}

double exact_pdb_serial(const PdbInstance& inst, const EnumerationOptions& opts) {
  const auto xs = enumerate_vertices_serial(inst.x_set(), opts);
  const auto ys = enumerate_vertices_serial(inst.y_set(), opts);
  double best = -kInf;
  for (long i = 0; i < static_cast<long>(xs.size()); ++i) best = std::max(best, best_pair(xs, ys, i));
  return best;
}

ExtendedReal recourse_cost(const ArInstance& inst, const Vector& x, const Vector& h, const SolverTolerances& tol) {
  require(x.size() == inst.n() && h.size() == inst.m(), ErrorCode::kDimensionMismatch, "recourse arguments");
  LpProblem lp = LpProblem::create(Sense::kMinimize, inst.n(), inst.m());
  lp.objective = inst.d();
  lp.rows = inst.b();
  const Vector demand = h - inst.a() * x;
  for (Index i = 0; i < inst.m(); ++i) lp.set_row(i, RowRelation::kGreaterEqual, demand[i]);
  const LpSolution s = solve_lp(lp, tol);
  if (s.status == LpStatus::kInfeasible) return ExtendedReal::plus_infinity();
  require(s.optimal(), ErrorCode::kModelError, "recourse LP is unbounded although d >= 0");
  return {s.objective, false};
}

namespace {

ExactQ reduce_vertices(const std::vector<Vector>& vertices, const std::vector<ExtendedReal>& values) {
  ExactQ out;
  out.value = {-kInf, false};
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const auto& v = values[k];
    const bool better = v.infinite ? !out.value.infinite : (!out.value.infinite && v.value > out.value.value);
    if (k == 0 || better) {
      out.value = v;
      out.worst_h = vertices[k];
    }
  }
  return out;
}

}  // namespace

ExactQ exact_q(const ArInstance& inst, const Vector& x, const EnumerationOptions& opts, const SolverTolerances& tol) {
  const auto vertices = enumerate_vertices(inst.u(), opts);
  std::vector<ExtendedReal> values(vertices.size());
  const long nv = static_cast<long>(vertices.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < nv; ++k) {
    values[static_cast<std::size_t>(k)] = recourse_cost(inst, x, vertices[static_cast<std::size_t>(k)], tol);
  }
  return reduce_vertices(vertices, values);
}

ExactQ exact_q_serial(const ArInstance& inst, const Vector& x, const EnumerationOptions& opts,
                      const SolverTolerances& tol) {
  const auto vertices = enumerate_vertices_serial(inst.u(), opts);
  std::vector<ExtendedReal> values;
  for (const auto& h : vertices) values.push_back(recourse_cost(inst, x, h, tol));
  return reduce_vertices(vertices, values);
}

}  // namespace bilin
