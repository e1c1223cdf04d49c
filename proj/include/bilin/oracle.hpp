#pragma once

#include "bilin/ar.hpp"
#include "bilin/pdb.hpp"
#include "bilin/polytope.hpp"

namespace bilin {

/// A real number or +infinity.
struct ExtendedReal {
  double value = 0.0;
  bool infinite = false;

  static ExtendedReal plus_infinity() { return {kInf, true}; }
  bool finite() const { return !infinite; }
  /// value, or +inf.
  double to_double() const { return infinite ? kInf : value; }
};

/// max x^T y over every vertex pair of X x Y.
double exact_pdb(const PdbInstance& inst, const EnumerationOptions& opts = {});
double exact_pdb_serial(const PdbInstance& inst, const EnumerationOptions& opts = {});

/// Minimum recourse cost min { d^T y : B y >= h - A x, y >= 0 } for one h.
ExtendedReal recourse_cost(const ArInstance& inst, const Vector& x, const Vector& h, const SolverTolerances& tol = {});

struct ExactQ {
  ExtendedReal value;
  Vector worst_h;  // a maximizing vertex of U
};

/// Q(x) as the maximum of the recourse cost over the vertices of U.
ExactQ exact_q(const ArInstance& inst, const Vector& x, const EnumerationOptions& opts = {},
               const SolverTolerances& tol = {});
ExactQ exact_q_serial(const ArInstance& inst, const Vector& x, const EnumerationOptions& opts = {},
                      const SolverTolerances& tol = {});

}  // namespace bilin
