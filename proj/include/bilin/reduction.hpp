#pragma once

#include "bilin/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bilin {

/// Monotone NAE-3SAT formula. Variables are 0-based here; the text format is 1-based.
/// A clause may repeat a variable; (v, v, v) can never be satisfied.
class MnaeInstance {
 public:
  using Clause = std::array<int, 3>;

  MnaeInstance(int variables, std::vector<Clause> clauses);

  int variables() const noexcept { return variables_; }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }

 private:
  int variables_;
  std::vector<Clause> clauses_;
};

/// min sum_v x_v y_v  s.t.  A x >= e, A y >= e, x, y >= 0, with A the
/// clause-by-variable incidence matrix (0/1, set semantics).
struct CdbInstance {
  Matrix incidence;

  Index clauses() const { return incidence.rows(); }
  Index variables() const { return incidence.cols(); }
};

inline constexpr int kMaxBruteForceVariables = 24;

CdbInstance reduce(const MnaeInstance& inst);

/// Exhaustive over all 2^V assignments. Throws kTooManyVariables above the cap.
bool nae_satisfiable(const MnaeInstance& inst);
bool nae_satisfiable_serial(const MnaeInstance& inst);

/// Bit v of the mask is variable v.
bool nae_satisfied_by(const MnaeInstance& inst, std::uint64_t assignment);

using CdbPair = std::pair<Vector, Vector>;

/// (x, e - x) with x the indicator of the true variables, if both sides cover.
std::optional<CdbPair> cdb_zero_witness(const CdbInstance& cdb, const std::vector<bool>& assignment);

/// First assignment (in mask order) whose witness exists, found by exhaustion
/// on the CDB side alone.
std::optional<std::vector<bool>> find_zero_witness(const CdbInstance& cdb);

/// Rounds a feasible fractional (x, y) with objective <= tol by thresholding
/// x_v > tol. Throws kPreconditionViolated if (x, y) is not such a point.
std::optional<CdbPair> round_zero_solution(const CdbInstance& cdb, const Vector& x, const Vector& y, double tol = 1e-9);

/// Clause count C, variables drawn uniformly in [0, V). Seeded from
/// Stream(seed).split("instance").
MnaeInstance random_mnae_instance(int variables, int clauses, std::uint64_t seed);

/// `p mnae V C` header, then C clause lines; `c` lines are comments.
MnaeInstance parse_mnae(std::string_view text);
std::string write_mnae(const MnaeInstance& inst);
std::string write_cdb(const CdbInstance& cdb);

}  // namespace bilin
