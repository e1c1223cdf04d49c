#pragma once

#include "bilin/lp.hpp"
#include "bilin/polytope.hpp"

#include <cstdint>
#include <optional>
#include <utility>

namespace bilin {

/// max { x^T y : x in X, y in Y } over two packing polytopes of equal dimension.
class PdbInstance {
 public:
  PdbInstance(PackingPolytope x, PackingPolytope y);

  const PackingPolytope& x_set() const { return x_; }
  const PackingPolytope& y_set() const { return y_; }
  Index dim() const { return x_.dim(); }

 private:
  PackingPolytope x_;
  PackingPolytope y_;
};

/// Logarithmic shrink factor 2 ln(m) / ln ln(m) + 2, evaluated at max(m, 16).
double zeta(std::int64_t m);

/// 8 * ceil(ln(1 / epsilon)).
int rounding_iterations(double epsilon);

double pdb_objective(const Vector& x, const Vector& y);

/// LP relaxation max sum theta_i gamma_i w_i s.t. sum theta_i P_i w_i <= p,
/// sum gamma_i Q_i w_i <= q, w >= 0. Throws kUnboundedCoordinate if any
/// coordinate maximum is infinite.
LpProblem build_lp_pdb(const PdbInstance& inst, const Vector& theta, const Vector& gamma);
LpProblem build_lp_pdb(const PdbInstance& inst, const SolverTolerances& tol = {});

/// The solved relaxation together with the scaling data rounding needs.
struct PdbRelaxation {
  Vector theta;
  Vector gamma;
  Vector omega;  // clipped to [0, 1]; zero wherever theta_i * gamma_i == 0
  double value = 0.0;
  long lp_iterations = 0;
};

PdbRelaxation solve_lp_pdb(const PdbInstance& inst, const SolverTolerances& tol = {});

class RoundingConfig {
 public:
  explicit RoundingConfig(double epsilon, std::uint64_t seed = 0);

  double epsilon() const { return epsilon_; }
  std::uint64_t seed() const { return seed_; }
  RoundingConfig& with_zeta(double zeta_x, double zeta_y);
  RoundingConfig& with_max_iterations(int iterations);

  /// (zeta_1, zeta_2) from the row counts unless overridden.
  std::pair<double, double> zetas(const PdbInstance& inst) const;
  int iterations() const;

 private:
  double epsilon_;
  std::uint64_t seed_;
  std::optional<std::pair<double, double>> zeta_override_;
  std::optional<int> max_iterations_override_;
};

/// One sampled candidate of the rounding loop and the three events it is
/// checked against: x feasible, y feasible, x^T y >= value / (2 zeta_1 zeta_2).
struct RoundingIterate {
  Vector x;
  Vector y;
  double objective = 0.0;
  bool x_feasible = false;
  bool y_feasible = false;
  bool meets_threshold = false;

  bool feasible() const { return x_feasible && y_feasible; }
  bool all_events() const { return feasible() && meets_threshold; }
};

/// Iteration `iteration` of the rounding loop. Its draws come from
/// Stream(seed).split("rounding").split(iteration) and nothing else.
RoundingIterate sample_rounding_iterate(const PdbInstance& inst, const PdbRelaxation& relax,
                                        std::pair<double, double> zetas, std::uint64_t seed,
                                        std::uint64_t iteration, double feas_tol);

struct PdbSolution {
  Vector x;
  Vector y;
  double objective = 0.0;
  bool near_integral = true;
  int iterations_used = 0;
  double lp_relaxation_value = 0.0;
  bool found_feasible = false;
  bool meets_threshold = false;
  int best_iteration = -1;
  double zeta_x = 0.0;
  double zeta_y = 0.0;
};

/// Randomized rounding of the relaxation: runs every one of T iterations and
/// keeps the feasible iterate with the largest objective (ties to the lower
/// iteration). Iterations run in parallel; round_pdb_serial is the reference.
PdbSolution round_pdb(const PdbInstance& inst, const RoundingConfig& config, const SolverTolerances& tol = {});
PdbSolution round_pdb(const PdbInstance& inst, const PdbRelaxation& relax, const RoundingConfig& config,
                      const SolverTolerances& tol = {});
PdbSolution round_pdb_serial(const PdbInstance& inst, const PdbRelaxation& relax, const RoundingConfig& config,
                             const SolverTolerances& tol = {});

}  // namespace bilin
