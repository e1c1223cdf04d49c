#include "bilin/pdb.hpp"

#include "bilin/error.hpp"
#include "bilin/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace bilin {

PdbInstance::PdbInstance(PackingPolytope x, PackingPolytope y) : x_(std::move(x)), y_(std::move(y)) {
  require(x_.dim() == y_.dim(), ErrorCode::kDimensionMismatch,
          "X has dimension " + std::to_string(x_.dim()) + " but Y has " + std::to_string(y_.dim()));
  require(!x_.is_signed() && !y_.is_signed(), ErrorCode::kInvalidArgument, "PDB sets must be packing polytopes");
}

double zeta(std::int64_t m) {
  const double me = static_cast<double>(std::max<std::int64_t>(m, 16));
  const double l = std::log(me);
  return 2.0 * l / std::log(l) + 2.0;
}

int rounding_iterations(double epsilon) {
  require(epsilon > 0.0 && epsilon < 1.0, ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1)");
  return 8 * static_cast<int>(std::ceil(std::log(1.0 / epsilon)));
}

double pdb_objective(const Vector& x, const Vector& y) {
  require(x.size() == y.size(), ErrorCode::kDimensionMismatch, "x and y differ in length");
  return x.dot(y);
}

LpProblem build_lp_pdb(const PdbInstance& inst, const Vector& theta, const Vector& gamma) {
  const Index n = inst.dim();
  require(theta.size() == n && gamma.size() == n, ErrorCode::kDimensionMismatch, "coordinate maxima length");
  for (Index i = 0; i < n; ++i) {
    require(std::isfinite(theta[i]) && std::isfinite(gamma[i]), ErrorCode::kUnboundedCoordinate,
            "coordinate " + std::to_string(i) + " has an unbounded maximum");
  }
  const auto& px = inst.x_set();
  const auto& qy = inst.y_set();
  const Index m1 = px.rows();
  const Index m2 = qy.rows();

  LpProblem lp = LpProblem::create(Sense::kMaximize, n, m1 + m2);
  lp.objective = theta.cwiseProduct(gamma);
  lp.rows.topRows(m1) = px.matrix() * theta.asDiagonal();
  lp.rows.bottomRows(m2) = qy.matrix() * gamma.asDiagonal();
  lp.rhs << px.rhs(), qy.rhs();
  for (Index i = 0; i < n; ++i) lp.variable_names.push_back("w" + std::to_string(i + 1));
  for (Index j = 0; j < m1; ++j) lp.row_names.push_back("P" + std::to_string(j + 1));
  for (Index j = 0; j < m2; ++j) lp.row_names.push_back("Q" + std::to_string(j + 1));
  return lp;
}

namespace {

Vector finite_maxima(const PackingPolytope& poly, const SolverTolerances& tol, const char* which) {
  const CoordinateMaxima cm = coordinate_maxima(poly, tol);
  const Index bad = cm.first_unbounded();
  require(bad < 0, ErrorCode::kUnboundedCoordinate,
          std::string(which) + " is unbounded along coordinate " + std::to_string(bad));
  return cm.values;
}

}  // namespace

LpProblem build_lp_pdb(const PdbInstance& inst, const SolverTolerances& tol) {
  return build_lp_pdb(inst, finite_maxima(inst.x_set(), tol, "X"), finite_maxima(inst.y_set(), tol, "Y"));
}

PdbRelaxation solve_lp_pdb(const PdbInstance& inst, const SolverTolerances& tol) {
  PdbRelaxation r;
  r.theta = finite_maxima(inst.x_set(), tol, "X");
  r.gamma = finite_maxima(inst.y_set(), tol, "Y");
  const LpSolution s = solve_lp(build_lp_pdb(inst, r.theta, r.gamma), tol);
  require(s.optimal(), ErrorCode::kModelError,
          "LP-PDB relaxation is " + std::string(to_string(s.status)) + "; 0 is always feasible and w <= 1");
  r.value = s.objective;
  r.lp_iterations = s.iterations;
  r.omega = s.primal.cwiseMax(0.0).cwiseMin(1.0);
  for (Index i = 0; i < inst.dim(); ++i) {
    if (r.theta[i] * r.gamma[i] == 0.0) r.omega[i] = 0.0;
  }
  return r;
}

RoundingConfig::RoundingConfig(double epsilon, std::uint64_t seed) : epsilon_(epsilon), seed_(seed) {
  require(epsilon > 0.0 && epsilon < 1.0, ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1)");
}

RoundingConfig& RoundingConfig::with_zeta(double zeta_x, double zeta_y) {
  require(zeta_x >= 1.0 && zeta_y >= 1.0, ErrorCode::kInvalidArgument, "zeta overrides must be at least 1");
  zeta_override_ = std::make_pair(zeta_x, zeta_y);
  return *this;
}

RoundingConfig& RoundingConfig::with_max_iterations(int iterations) {
  require(iterations >= 1, ErrorCode::kInvalidArgument, "iteration override must be positive");
  max_iterations_override_ = iterations;
  return *this;
}

std::pair<double, double> RoundingConfig::zetas(const PdbInstance& inst) const {
  if (zeta_override_) return *zeta_override_;
  return {zeta(inst.x_set().rows()), zeta(inst.y_set().rows())};
}

int RoundingConfig::iterations() const {
  return max_iterations_override_ ? *max_iterations_override_ : rounding_iterations(epsilon_);
}

RoundingIterate sample_rounding_iterate(const PdbInstance& inst, const PdbRelaxation& relax,
                                        std::pair<double, double> zetas, std::uint64_t seed,
                                        std::uint64_t iteration, double feas_tol) {
  const Index n = inst.dim();
  Stream stream = Stream(seed).split("rounding").split(iteration);
  RoundingIterate it;
  it.x = Vector::Zero(n);
  it.y = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (stream.bernoulli(relax.omega[i])) {
      it.x[i] = relax.theta[i] / zetas.first;
      it.y[i] = relax.gamma[i] / zetas.second;
    }
  }
  it.objective = it.x.dot(it.y);
  it.x_feasible = contains(inst.x_set(), it.x, feas_tol);
  it.y_feasible = contains(inst.y_set(), it.y, feas_tol);
  const double threshold = relax.value / (2.0 * zetas.first * zetas.second);
  it.meets_threshold = it.objective >= threshold - 1e-12 * (1.0 + threshold);
  return it;
}

namespace {

// Sequential reduction over the iterates in index order, so the parallel
// and serial variants pick the same incumbent.
PdbSolution select_incumbent(const PdbInstance& inst, const PdbRelaxation& relax, std::pair<double, double> zetas,
                             std::vector<RoundingIterate>& iterates) {
  PdbSolution out;
  out.x = Vector::Zero(inst.dim());
  out.y = Vector::Zero(inst.dim());
  out.iterations_used = static_cast<int>(iterates.size());
  out.lp_relaxation_value = relax.value;
  out.zeta_x = zetas.first;
  out.zeta_y = zetas.second;
  for (std::size_t t = 0; t < iterates.size(); ++t) {
    auto& it = iterates[t];
    if (!it.feasible()) continue;
    if (!out.found_feasible || it.objective > out.objective) {
      out.found_feasible = true;
      out.objective = it.objective;
      out.meets_threshold = it.meets_threshold;
      out.best_iteration = static_cast<int>(t);
      out.x = std::move(it.x);
      out.y = std::move(it.y);
    }
  }
  return out;
}

}  // namespace

PdbSolution round_pdb(const PdbInstance& inst, const PdbRelaxation& relax, const RoundingConfig& config,
                      const SolverTolerances& tol) {
  const auto zetas = config.zetas(inst);
  const int t_max = config.iterations();
  std::vector<RoundingIterate> iterates(static_cast<std::size_t>(t_max));
#pragma omp parallel for schedule(static)
  for (int t = 0; t < t_max; ++t) {
    iterates[static_cast<std::size_t>(t)] =
        sample_rounding_iterate(inst, relax, zetas, config.seed(), static_cast<std::uint64_t>(t), tol.feas);
  }
  return select_incumbent(inst, relax, zetas, iterates);
}

PdbSolution round_pdb_serial(const PdbInstance& inst, const PdbRelaxation& relax, const RoundingConfig& config,
                             const SolverTolerances& tol) {
  const auto zetas = config.zetas(inst);
  const int t_max = config.iterations();
  std::vector<RoundingIterate> iterates;
  iterates.reserve(static_cast<std::size_t>(t_max));
  for (int t = 0; t < t_max; ++t) {
    iterates.push_back(
        sample_rounding_iterate(inst, relax, zetas, config.seed(), static_cast<std::uint64_t>(t), tol.feas));
  }
  return select_incumbent(inst, relax, zetas, iterates);
}

PdbSolution round_pdb(const PdbInstance& inst, const RoundingConfig& config, const SolverTolerances& tol) {
  return round_pdb(inst, solve_lp_pdb(inst, tol), config, tol);
}

}  // namespace bilin
