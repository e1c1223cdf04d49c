#pragma once

#include "bilin/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bilin {

enum class Sense { kMaximize, kMinimize };
enum class RowRelation { kLessEqual, kGreaterEqual, kEqual };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string_view to_string(LpStatus status);

/// Dense linear program
///   max/min  c^T x  s.t.  rows * x (<=|>=|=) rhs,  lower <= x <= upper.
///
/// Lower bounds default to 0 and upper bounds to +inf. Either bound may be
/// infinite; free variables are split internally by the solver.
struct LpProblem {
  Sense sense = Sense::kMaximize;
  Vector objective;
  Matrix rows;
  std::vector<RowRelation> relations;
  Vector rhs;
  Vector lower;
  Vector upper;
  std::vector<std::string> variable_names;
  std::vector<std::string> row_names;

  /// Zero-filled problem with `num_rows` <= rows and default bounds.
  static LpProblem create(Sense sense, Index num_cols, Index num_rows);

  Index num_cols() const { return objective.size(); }
  Index num_rows() const { return rhs.size(); }

  void set_row(Index i, RowRelation relation, double rhs_value);

  /// Throws kDimensionMismatch or kInvalidArgument when the invariants fail.
  void validate() const;

  std::string variable_name(Index j) const;
  std::string row_name(Index i) const;
};

struct SolverTolerances {
  double feas = 1e-7;
  double opt = 1e-7;
  double pivot = 1e-10;
  double comp = 1e-6;
  // Each <= row's rhs is relaxed by a deterministic amount in
  // [0.5, 1] * perturbation * (1 + |rhs|) while pivoting, then removed.
  // 0 disables.
  double perturbation = 1e-6;
  // 0 selects 50 * (rows + cols) + 1000.
  long max_iterations = 0;
  // Tableaus with fewer cells than this are pivoted by the serial kernel.
  std::size_t parallel_pivot_cells = std::size_t{1} << 16;
};

/// Result of solve_lp. For kOptimal all vectors are populated:
/// duals[i] is d(objective)/d(rhs[i]) and reduced_costs = c - rows^T duals.
struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Vector primal;
  Vector duals;
  Vector reduced_costs;
  double objective = 0.0;
  double dual_objective = 0.0;
  long iterations = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

/// Two-phase dense tableau simplex. Dantzig pricing, switching to Bland's
/// rule after 3 * (rows + cols) consecutive degenerate pivots. Deterministic.
LpSolution solve_lp(const LpProblem& problem, const SolverTolerances& tol = {});

/// Largest violation of rows and bounds at `x`, each scaled by 1 + |rhs|.
double primal_residual(const LpProblem& problem, const Vector& x);

/// Human-readable LP text (objective, constraints, bounds) in a CPLEX-like
/// layout. parse_lp reads it back exactly.
std::string export_lp(const LpProblem& problem);
LpProblem parse_lp(std::string_view text);

}  // namespace bilin
