#pragma once

#include "bilin/lp.hpp"
#include "bilin/pdb.hpp"
#include "bilin/polytope.hpp"

#include <cstdint>

namespace bilin {

/// Two-stage robust covering problem
///   min  c^T x + max_{h in U} min_{y >= 0} { d^T y : B y >= h - A x },  x >= 0,
/// with U = {h >= 0 : R h <= r}. A (m x n) and B (m x n) may carry signed
/// entries; c, d, R, r are nonnegative.
class ArInstance {
 public:
  ArInstance(Matrix a, Matrix b, Vector c, Vector d, PackingPolytope u);

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Vector& c() const { return c_; }
  const Vector& d() const { return d_; }
  const PackingPolytope& u() const { return u_; }

  Index n() const { return a_.cols(); }
  Index m() const { return a_.rows(); }
  Index uncertainty_rows() const { return u_.rows(); }

  /// {z >= 0 : B^T z <= d}; signed mode when B has a negative entry.
  const PackingPolytope& dual_feasible_set() const { return dual_; }

 private:
  Matrix a_;
  Matrix b_;
  Vector c_;
  Vector d_;
  PackingPolytope u_;
  PackingPolytope dual_;
};

struct ArThetaGamma {
  Vector theta;  // max z_i over the dual-feasible set
  Vector gamma;  // max h_i over U
  double eta = 0.0;   // zeta(n)
  double beta = 0.0;  // zeta(rows of R)
};

/// Throws kUnboundedCoordinate naming the first infinite theta or gamma.
ArThetaGamma theta_gamma(const ArInstance& inst, const SolverTolerances& tol = {});

/// Q^LP(x, y0) = max sum_i (theta_i gamma_i - theta_i a_i^T x - theta_i b_i^T y0) w_i
/// s.t. sum_i theta_i b_i w_i <= d (n rows), sum_i gamma_i R_i w_i <= r (rows of R).
/// Throws kPreconditionViolated unless x, y0 >= 0 and A x + B y0 >= -feas_tol.
LpProblem build_qlp(const ArInstance& inst, const ArThetaGamma& tg, const Vector& x, const Vector& y0,
                    double feas_tol = 1e-7);

struct QlpSolution {
  double value = 0.0;
  Vector omega;
  Vector coefficients;  // objective of the LP, one per coordinate
};

QlpSolution solve_qlp(const ArInstance& inst, const ArThetaGamma& tg, const Vector& x, const Vector& y0,
                      const SolverTolerances& tol = {});

/// LP-AR over the blocks [x | y0 | y | alpha] (3n + rows of R variables):
///   min c^T x + d^T y0 + d^T y + r^T alpha
///   s.t. theta_i a_i^T x + theta_i b_i^T (y0 + y) + gamma_i R_i^T alpha >= theta_i gamma_i   (m rows)
///        A x + B y0 >= 0                                                                   (m rows)
LpProblem build_lp_ar(const ArInstance& inst, const ArThetaGamma& tg);

struct ArSolution {
  Vector x;
  Vector y0;
  Vector y;
  Vector alpha;
  double z_lp_ar = 0.0;
  ArThetaGamma tg;
  long lp_iterations = 0;
};

/// Throws kInfeasibleRestriction or kModelError for an infeasible or
/// unbounded restriction.
ArSolution solve_lp_ar(const ArInstance& inst, const ArThetaGamma& tg, const SolverTolerances& tol = {});
ArSolution solve_lp_ar(const ArInstance& inst, const SolverTolerances& tol = {});

/// With B >= 0 and A = 0 the separation problem is the PDB instance
/// (dual-feasible set, U). Throws kPreconditionViolated when B is signed.
PdbInstance induced_pdb(const ArInstance& inst);

/// Near-integral adversary (h, z): h_i in {0, gamma_i / beta}, z_i in {0, theta_i / eta}.
struct SeparationPoint {
  Vector h;
  Vector z;
  double objective = 0.0;  // sum_i (h_i - (A x + B y0)_i) z_i
  double qlp_value = 0.0;  // Q^LP(beta x, beta y0)
  bool success = false;    // all three target properties hold
  int attempts = 0;
};

inline constexpr int kSeparationAttempts = 16;

/// Rounds Q^LP(beta x, beta y0). Attempt k draws from
/// Stream(seed).split("separation").split(k). Returns the first attempt with
/// B^T z <= d, R h <= r and objective >= Q^LP / (2 eta beta); otherwise the
/// best attempt by objective with success = false.
SeparationPoint round_separation(const ArInstance& inst, const ArThetaGamma& tg, const Vector& x, const Vector& y0,
                                 std::uint64_t seed, const SolverTolerances& tol = {});

/// c^T x + Q(x) with Q from the vertex-enumeration oracle. Returns +inf when
/// the recourse is infeasible at some vertex of U.
double evaluate_first_stage(const ArInstance& inst, const Vector& x, const EnumerationOptions& opts = {},
                            const SolverTolerances& tol = {});

}  // namespace bilin
