#pragma once

// Small random AR instances for exact-oracle checks. B is kept nonnegative
// with a unit diagonal so the dual-feasible set is a true packing polytope;
// A is signed unless zero_a is set.

#include "bilin/ar.hpp"
#include "bilin/rng.hpp"

namespace fixtures {

inline bilin::ArInstance one_dim_instance() {
  using bilin::Matrix;
  using bilin::Vector;
  return bilin::ArInstance(Matrix::Ones(1, 1), Matrix::Ones(1, 1), Vector::Ones(1), Vector::Ones(1),
                           bilin::PackingPolytope(Matrix::Ones(1, 1), Vector::Ones(1)));
}

inline bilin::PackingPolytope budget_set(bilin::Stream& rng, bilin::Index m, bilin::Index budgets) {
  bilin::Matrix r = bilin::Matrix::Zero(m + budgets, m);
  r.topRows(m) = bilin::Matrix::Identity(m, m);
  for (bilin::Index l = 0; l < budgets; ++l) {
    for (bilin::Index i = 0; i < m; ++i) r(m + l, i) = rng.uniform();
    r.row(m + l) /= r.row(m + l).norm();
  }
  return bilin::PackingPolytope(r, bilin::Vector::Ones(m + budgets));
}

inline bilin::ArInstance small_ar_instance(bilin::Stream& rng, bilin::Index n, bilin::Index budgets,
                                           bool zero_a = false) {
  using bilin::Index;
  bilin::Matrix a = bilin::Matrix::Zero(n, n);
  bilin::Matrix b = bilin::Matrix::Identity(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (!zero_a) a(i, j) = (i == j ? 1.0 : 0.0) + (rng.uniform() - 0.5);
      b(i, j) += 0.5 * rng.uniform();
    }
  }
  bilin::Vector c(n), d(n);
  for (Index j = 0; j < n; ++j) {
    c[j] = 0.5 + rng.uniform();
    d[j] = 0.5 + rng.uniform();
  }
  return bilin::ArInstance(a, b, c, d, budget_set(rng, n, budgets));
}

// x, y0 >= 0 with A x + B y0 >= 0; B has a unit diagonal, so raising y0
// always closes the gap.
inline std::pair<bilin::Vector, bilin::Vector> random_first_stage(bilin::Stream& rng, const bilin::ArInstance& inst) {
  const bilin::Index n = inst.n();
  bilin::Vector x(n), y0(n);
  for (bilin::Index j = 0; j < n; ++j) {
    x[j] = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
    y0[j] = rng.uniform() < 0.5 ? 0.0 : 0.5 * rng.uniform();
  }
  for (int k = 0; k < 64; ++k) {
    const bilin::Vector cover = inst.a() * x + inst.b() * y0;
    if (cover.minCoeff() >= 0.0) break;
    for (bilin::Index i = 0; i < n; ++i) {
      if (cover[i] < 0.0) y0[i] += -cover[i];
    }
  }
  return {x, y0};
}

}  // namespace fixtures
