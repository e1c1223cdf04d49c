#pragma once

#include "bilin/ar.hpp"
#include "bilin/lp.hpp"

namespace bilin {

/// Recourse restricted to y(h) = y0 + Y h.
struct AffinePolicy {
  Vector x;
  Vector y0;
  Matrix y;  // n x m, free sign
  double z_aff = 0.0;
  double seconds = 0.0;  // LP build + solve wall clock
  long lp_iterations = 0;
};

/// Column layout of the robust counterpart. Blocks, in order:
///   x (n) | y0 (n) | Y (n*m, row-major, free) | lambda_i (L per covering row i)
///   | mu_j (L per policy coordinate j) | nu (L) | t (1)
/// where L is the number of rows of R.
struct AffineLayout {
  Index n = 0;
  Index m = 0;
  Index lr = 0;

  Index x(Index j) const { return j; }
  Index y0(Index j) const { return n + j; }
  Index y(Index j, Index k) const { return 2 * n + j * m + k; }
  Index lambda(Index i, Index l) const { return 2 * n + n * m + i * lr + l; }
  Index mu(Index j, Index l) const { return 2 * n + n * m + m * lr + j * lr + l; }
  Index nu(Index l) const { return 2 * n + n * m + (m + n) * lr + l; }
  Index t() const { return 2 * n + n * m + (m + n + 1) * lr; }
  Index cols() const { return t() + 1; }
  Index rows() const { return (m + n) * (m + 1) + m + 1; }
};

inline Index affine_variable_count(Index n, Index m, Index lr) { return AffineLayout{n, m, lr}.cols(); }
inline Index lp_ar_variable_count(Index n, Index lr) { return 3 * n + lr; }

/// Robust counterpart obtained by dualizing each semi-infinite row over
/// U = {h >= 0 : R h <= r}; objective min t. Rows, in order:
///   per covering row i:  r^T lambda_i <= (A x + B y0)_i,
///                        R^T lambda_i + (B Y - I)_i^T >= 0          (m rows)
///   per coordinate j:    r^T mu_j <= y0_j,  R^T mu_j + Y_j^T >= 0  (m rows)
///   epigraph:            R^T nu - Y^T d >= 0 (m rows),  t - c^T x - d^T y0 - r^T nu >= 0
/// Throws kUnboundedCoordinate if some gamma_i is infinite.
LpProblem build_affine_lp(const ArInstance& inst);

AffinePolicy solve_affine(const ArInstance& inst, const SolverTolerances& tol = {});

/// Largest violation of the policy constraints at scenario h: covering rows,
/// nonnegativity of y0 + Y h, and the cost epigraph. <= 0 means feasible.
double affine_violation(const ArInstance& inst, const AffinePolicy& policy, const Vector& h);

/// c^T x + d^T (y0 + Y h).
double affine_realized_cost(const ArInstance& inst, const AffinePolicy& policy, const Vector& h);

}  // namespace bilin
