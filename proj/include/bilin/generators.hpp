#pragma once

#include "bilin/ar.hpp"
#include "bilin/pdb.hpp"

#include <cstdint>
#include <optional>

namespace bilin {

struct ArGeneratorOptions {
  /// Entries of G are N(0, 1) * g_scale; defaults to 1 / sqrt(m).
  std::optional<double> g_scale;
  int max_resamples = 32;
};

struct GeneratedAr {
  ArInstance instance;
  int resamples = 0;  // number of rejected G draws
  double g_scale = 0.0;
};

/// m = n, c = d = 1, A = B = I + G. U stacks the m box rows h_i <= 1 and then
/// L budget rows |W_l| / ||W_l|| h <= 1 for a Gaussian L x m matrix W.
/// G is redrawn from Stream(seed).split("instance").split("G").split(k)
/// until every theta_i is finite; W comes from split("instance").split("W").
/// Throws kGeneratorExhausted after max_resamples rejected draws.
GeneratedAr generate_ar_instance(Index n, Index budgets, std::uint64_t seed, const ArGeneratorOptions& opts = {});

struct GeneratedPdb {
  PdbInstance instance;
  int patched_columns = 0;  // zero columns given a 1e-3 entry
};

/// P, Q ~ U[0, 1] entrywise and p, q ~ U[1, 2]. A column of P or Q with no
/// positive entry has 1e-3 added at a random row so theta and gamma stay finite.
GeneratedPdb generate_pdb_instance(Index n, Index m1, Index m2, std::uint64_t seed);

}  // namespace bilin
