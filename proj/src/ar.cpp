#include "bilin/ar.hpp"

#include "bilin/error.hpp"
#include "bilin/oracle.hpp"
#include "bilin/rng.hpp"

#include <algorithm>
#include <cmath>

namespace bilin {

namespace {

PackingPolytope make_dual_set(const Matrix& b, const Vector& d) {
  const bool is_signed = b.size() > 0 && b.minCoeff() < 0.0;
  return PackingPolytope(b.transpose(), d,
                         is_signed ? PackingPolytope::MatrixSign::kSigned : PackingPolytope::MatrixSign::kNonnegative);
}

void check_first_stage(const ArInstance& inst, const Vector& x, const Vector& y0, double feas_tol) {
  require(x.size() == inst.n() && y0.size() == inst.n(), ErrorCode::kDimensionMismatch,
          "first-stage vectors must have length n = " + std::to_string(inst.n()));
  require(x.size() == 0 || x.minCoeff() >= -feas_tol, ErrorCode::kPreconditionViolated, "x must be nonnegative");
  require(y0.size() == 0 || y0.minCoeff() >= -feas_tol, ErrorCode::kPreconditionViolated, "y0 must be nonnegative");
  const Vector cover = inst.a() * x + inst.b() * y0;
  for (Index i = 0; i < cover.size(); ++i) {
    require(cover[i] >= -feas_tol, ErrorCode::kPreconditionViolated,
            "(A x + B y0)_" + std::to_string(i) + " = " + std::to_string(cover[i]) + " is negative");
  }
}

}  // namespace

ArInstance::ArInstance(Matrix a, Matrix b, Vector c, Vector d, PackingPolytope u)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)), u_(std::move(u)) {
  require(a_.rows() >= 1 && a_.cols() >= 1, ErrorCode::kInvalidArgument, "A must be non-empty");
  require(b_.rows() == a_.rows() && b_.cols() == a_.cols(), ErrorCode::kDimensionMismatch, "B must match A in shape");
  require(c_.size() == a_.cols() && d_.size() == a_.cols(), ErrorCode::kDimensionMismatch, "c and d need length n");
  require(u_.dim() == a_.rows(), ErrorCode::kDimensionMismatch, "U must live in R^m");
  require(!u_.is_signed(), ErrorCode::kInvalidArgument, "U must be a packing polytope");
  require(a_.allFinite() && b_.allFinite() && c_.allFinite() && d_.allFinite(), ErrorCode::kInvalidArgument,
          "instance data must be finite");
  require(c_.minCoeff() >= 0.0 && d_.minCoeff() >= 0.0, ErrorCode::kInvalidArgument, "c and d must be nonnegative");
  dual_ = make_dual_set(b_, d_);
}

ArThetaGamma theta_gamma(const ArInstance& inst, const SolverTolerances& tol) {
  ArThetaGamma tg;
  const CoordinateMaxima th = coordinate_maxima(inst.dual_feasible_set(), tol);
  require(th.first_unbounded() < 0, ErrorCode::kUnboundedCoordinate,
          "theta_" + std::to_string(th.first_unbounded()) + " is unbounded");
  const CoordinateMaxima ga = coordinate_maxima(inst.u(), tol);
  require(ga.first_unbounded() < 0, ErrorCode::kUnboundedCoordinate,
          "gamma_" + std::to_string(ga.first_unbounded()) + " is unbounded");
  tg.theta = th.values;
  tg.gamma = ga.values;
  tg.eta = zeta(inst.n());
  tg.beta = zeta(inst.uncertainty_rows());
  return tg;
}

LpProblem build_qlp(const ArInstance& inst, const ArThetaGamma& tg, const Vector& x, const Vector& y0,
                    double feas_tol) {
  check_first_stage(inst, x, y0, feas_tol);
  const Index m = inst.m();
  const Index n = inst.n();
  const Index lr = inst.uncertainty_rows();
  const Vector cover = inst.a() * x + inst.b() * y0;

  LpProblem lp = LpProblem::create(Sense::kMaximize, m, n + lr);
  for (Index i = 0; i < m; ++i) {
    double coef = tg.theta[i] * tg.gamma[i] - tg.theta[i] * cover[i];
    // A zero column with a round-off positive coefficient would be unbounded.
    if (tg.gamma[i] == 0.0 || tg.theta[i] == 0.0) coef = std::min(coef, 0.0);
    lp.objective[i] = coef;
  }
  lp.rows.topRows(n) = inst.b().transpose() * tg.theta.asDiagonal();
  lp.rows.bottomRows(lr) = inst.u().matrix() * tg.gamma.asDiagonal();
  lp.rhs << inst.d(), inst.u().rhs();
  for (Index i = 0; i < m; ++i) lp.variable_names.push_back("w" + std::to_string(i + 1));
  for (Index j = 0; j < n; ++j) lp.row_names.push_back("dual" + std::to_string(j + 1));
  for (Index l = 0; l < lr; ++l) lp.row_names.push_back("U" + std::to_string(l + 1));
  return lp;
}

QlpSolution solve_qlp(const ArInstance& inst, const ArThetaGamma& tg, const Vector& x, const Vector& y0,
                      const SolverTolerances& tol) {
  const LpProblem lp = build_qlp(inst, tg, x, y0, tol.feas);
  const LpSolution s = solve_lp(lp, tol);
  require(s.status != LpStatus::kUnbounded, ErrorCode::kModelError, "Q^LP is unbounded");
  require(s.optimal(), ErrorCode::kModelError, "Q^LP is infeasible although w = 0 is feasible");
  QlpSolution out;
  out.value = s.objective;
  out.omega = s.primal;
  out.coefficients = lp.objective;
  return out;
}

LpProblem build_lp_ar(const ArInstance& inst, const ArThetaGamma& tg) {
  const Index m = inst.m();
  const Index n = inst.n();
  const Index lr = inst.uncertainty_rows();
  for (Index i = 0; i < m; ++i) {
    require(std::isfinite(tg.theta[i]) && std::isfinite(tg.gamma[i]), ErrorCode::kUnboundedCoordinate,
            "coordinate " + std::to_string(i) + " has an unbounded maximum");
  }
  LpProblem lp = LpProblem::create(Sense::kMinimize, 3 * n + lr, 2 * m);
  lp.objective << inst.c(), inst.d(), inst.d(), inst.u().rhs();

  const auto th = tg.theta.asDiagonal();
  lp.rows.block(0, 0, m, n) = th * inst.a();
  lp.rows.block(0, n, m, n) = th * inst.b();
  lp.rows.block(0, 2 * n, m, n) = th * inst.b();
  lp.rows.block(0, 3 * n, m, lr) = tg.gamma.asDiagonal() * inst.u().matrix().transpose();
  lp.rows.block(m, 0, m, n) = inst.a();
  lp.rows.block(m, n, m, n) = inst.b();
  for (Index i = 0; i < m; ++i) {
    lp.set_row(i, RowRelation::kGreaterEqual, tg.theta[i] * tg.gamma[i]);
    lp.set_row(m + i, RowRelation::kGreaterEqual, 0.0);
  }

  for (Index j = 0; j < n; ++j) lp.variable_names.push_back("x" + std::to_string(j + 1));
  for (Index j = 0; j < n; ++j) lp.variable_names.push_back("y0_" + std::to_string(j + 1));
  for (Index j = 0; j < n; ++j) lp.variable_names.push_back("y" + std::to_string(j + 1));
  for (Index l = 0; l < lr; ++l) lp.variable_names.push_back("alpha" + std::to_string(l + 1));
  for (Index i = 0; i < m; ++i) lp.row_names.push_back("cover" + std::to_string(i + 1));
  for (Index i = 0; i < m; ++i) lp.row_names.push_back("first" + std::to_string(i + 1));
  return lp;
}

ArSolution solve_lp_ar(const ArInstance& inst, const ArThetaGamma& tg, const SolverTolerances& tol) {
  const LpSolution s = solve_lp(build_lp_ar(inst, tg), tol);
  require(s.status != LpStatus::kInfeasible, ErrorCode::kInfeasibleRestriction,
          "LP-AR is infeasible: some row has theta_i gamma_i > 0 and no covering coefficient");
  require(s.status != LpStatus::kUnbounded, ErrorCode::kModelError,
          "LP-AR is unbounded although its objective is nonnegative");
  const Index n = inst.n();
  ArSolution out;
  out.x = s.primal.segment(0, n);
  out.y0 = s.primal.segment(n, n);
  out.y = s.primal.segment(2 * n, n);
  out.alpha = s.primal.segment(3 * n, inst.uncertainty_rows());
  out.z_lp_ar = s.objective;
  out.tg = tg;
  out.lp_iterations = s.iterations;
  return out;
}

ArSolution solve_lp_ar(const ArInstance& inst, const SolverTolerances& tol) {
  return solve_lp_ar(inst, theta_gamma(inst, tol), tol);
}

PdbInstance induced_pdb(const ArInstance& inst) {
  require(!inst.dual_feasible_set().is_signed(), ErrorCode::kPreconditionViolated,
          "the induced PDB instance needs B >= 0");
  return PdbInstance(inst.dual_feasible_set(), inst.u());
}

SeparationPoint round_separation(const ArInstance& inst, const ArThetaGamma& tg, const Vector& x, const Vector& y0,
                                 std::uint64_t seed, const SolverTolerances& tol) {
  const QlpSolution q = solve_qlp(inst, tg, tg.beta * x, tg.beta * y0, tol);
  const Index m = inst.m();
  Vector omega = q.omega.cwiseMax(0.0).cwiseMin(1.0);
  for (Index i = 0; i < m; ++i) {
    if (q.coefficients[i] < 0.0) omega[i] = 0.0;
  }
  const Vector cover = inst.a() * x + inst.b() * y0;
  const double threshold = q.value / (2.0 * tg.eta * tg.beta);
  const Stream base = Stream(seed).split("separation");

  SeparationPoint best;
  bool have_best = false;
  for (int k = 0; k < kSeparationAttempts; ++k) {
    Stream stream = base.split(static_cast<std::uint64_t>(k));
    SeparationPoint p;
    p.h = Vector::Zero(m);
    p.z = Vector::Zero(m);
    for (Index i = 0; i < m; ++i) {
      if (stream.bernoulli(omega[i])) {
        p.h[i] = tg.gamma[i] / tg.beta;
        p.z[i] = tg.theta[i] / tg.eta;
      }
    }
    p.objective = (p.h - cover).dot(p.z);
    p.qlp_value = q.value;
    p.attempts = k + 1;
    p.success = contains(inst.dual_feasible_set(), p.z, tol.feas) && contains(inst.u(), p.h, tol.feas) &&
                p.objective >= threshold - 1e-12 * (1.0 + std::abs(threshold));
    if (p.success) return p;
    if (!have_best || p.objective > best.objective) {
      best = std::move(p);
      have_best = true;
    }
  }
  best.attempts = kSeparationAttempts;
  return best;
}

double evaluate_first_stage(const ArInstance& inst, const Vector& x, const EnumerationOptions& opts,
                            const SolverTolerances& tol) {
  const ExactQ q = exact_q(inst, x, opts, tol);
  return q.value.infinite ? kInf : inst.c().dot(x) + q.value.value;
}

}  // namespace bilin
