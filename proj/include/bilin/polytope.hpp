#pragma once

#include "bilin/lp.hpp"
#include "bilin/types.hpp"

#include <cstdint>
#include <vector>

namespace bilin {

/// {v >= 0 : M v <= b} with M, b >= 0.
///
/// The dual-feasible set {z >= 0 : B^T z <= d} of a recourse problem may have
/// signed matrix entries; constructing with MatrixSign::kSigned admits those
/// (the right-hand side must still be nonnegative, so 0 stays feasible).
class PackingPolytope {
 public:
  enum class MatrixSign { kNonnegative, kSigned };

  PackingPolytope() = default;
  PackingPolytope(Matrix matrix, Vector rhs, MatrixSign sign = MatrixSign::kNonnegative);

  Index rows() const { return matrix_.rows(); }
  Index dim() const { return matrix_.cols(); }
  const Matrix& matrix() const { return matrix_; }
  const Vector& rhs() const { return rhs_; }
  bool is_signed() const { return sign_ == MatrixSign::kSigned; }

  /// Box [0, upper]^dim as a packing polytope.
  static PackingPolytope box(Index dim, double upper = 1.0);

 private:
  Matrix matrix_;
  Vector rhs_;
  MatrixSign sign_ = MatrixSign::kNonnegative;
};

/// Per-coordinate maxima max{v_i : v in poly}.
struct CoordinateMaxima {
  Vector values;
  std::vector<bool> finite;

  bool all_finite() const;
  /// Index of the first non-finite entry, or -1.
  Index first_unbounded() const;
};

CoordinateMaxima coordinate_maxima(const PackingPolytope& poly, const SolverTolerances& tol = {});

/// point >= -tol and M point <= b + tol * (1 + |b|), componentwise.
bool contains(const PackingPolytope& poly, const Vector& point, double tol);

struct EnumerationOptions {
  std::uint64_t cap = 2'000'000;
  double dedup_tol = 1e-8;
  double feas_tol = 1e-9;
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Every vertex of the polytope, each exactly once, ordered by the first basis
/// (in lexicographic combination order) that produced it. Throws
/// kEnumerationTooLarge when C(rows + dim, dim) exceeds the cap. The OpenMP
/// version splits the basis candidates across threads.
std::vector<Vector> enumerate_vertices(const PackingPolytope& poly, const EnumerationOptions& opts = {});
std::vector<Vector> enumerate_vertices_serial(const PackingPolytope& poly, const EnumerationOptions& opts = {});

}  // namespace bilin
