#pragma once

#include "bilin/lp.hpp"
#include "bilin/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bilin {

enum class ExperimentMode { kPdb, kArVsAffine, kChernoff, kReduce };

std::string_view to_string(ExperimentMode mode);

struct ChernoffParams {
  Index r = 100;
  double weight = 1.0;   // every weight equals this
  double prob = 0.01;    // every success probability equals this
  double delta = 1.0;
  long samples = 100000;
};

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::kArVsAffine;
  Index n = 20;
  Index m = 20;  // m1 = m2 for pdb; must equal n for ar-vs-affine
  Index L = 20;
  std::vector<std::uint64_t> seeds{0};
  double epsilon = 0.25;
  std::string output;
  SolverTolerances tol;
  std::optional<double> g_scale;
  ChernoffParams chernoff;
  int reduce_variables = 10;
  int reduce_clauses = 20;

  /// Throws kInvalidArgument on non-positive dimensions or an empty seed list.
  void validate() const;
};

/// JSON object with keys mode, n, m, L, seeds, epsilon, output, g_scale,
/// tolerances, chernoff, reduce. Unknown keys are rejected. `seeds` is a list
/// or {"first": s, "count": k}.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
  Index n = 0;
  Index L = 0;
  std::uint64_t seed = 0;
  double z_lp_ar = kNaN;
  double z_aff = kNaN;
  double ratio = kNaN;       // z_lp_ar / z_aff when both finite and z_aff > 0
  double t_lp_s = 0.0;       // theta/gamma + LP-AR build + solve
  double t_aff_s = 0.0;      // affine build + solve
  double t_tg_s = 0.0;       // theta/gamma alone
  double t_lp_excl_s = 0.0;  // LP-AR build + solve without theta/gamma
  Index lp_ar_vars = 0;
  Index aff_vars = 0;
  int resamples = 0;
  double g_scale = 0.0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

/// One row per seed. Rows run in parallel; the result is sorted by (n, L, seed).
/// A failure in one row is recorded in its status and the run continues.
std::vector<ResultRow> run_benchmark(const ExperimentConfig& config);

/// Columns n,L,seed,z_lp_ar,z_aff,ratio,t_lp_s,t_aff_s,status followed by a
/// summary row (seed column "median") over the rows with status ok. With
/// include_timing false the two time columns are left empty.
std::string benchmark_csv(const std::vector<ResultRow>& rows, bool include_timing = true);

/// Companion file: n,L,seed,t_tg_s,t_lp_excl_s,t_lp_s,t_aff_s,lp_ar_vars,aff_vars,resamples,g_scale.
std::string benchmark_timing_csv(const std::vector<ResultRow>& rows);

/// Median of the finite values; NaN when there are none.
double median(std::vector<double> values);

struct ChernoffReport {
  double expectation = 0.0;
  double s = 0.0;  // max(1, expectation)
  double upper_threshold = 0.0;
  double upper_frequency = 0.0;
  double upper_bound = 0.0;
  double upper_sigma = 0.0;
  bool has_lower = false;  // lower tail only for 0 < delta < 1
  double lower_threshold = 0.0;
  double lower_frequency = 0.0;
  double lower_bound = 0.0;
  double lower_sigma = 0.0;
  long samples = 0;

  /// frequency <= bound + k * sigma on every reported tail.
  bool within(double k = 3.0) const;
};

/// Monte-Carlo tails of Xi = sum_i w_i chi_i with chi_i ~ Bernoulli(p_i):
/// P(Xi >= (1 + delta) s) against (e^delta / (1 + delta)^(1 + delta))^s and
/// P(Xi <= (1 - delta) E Xi) against exp(-delta^2 E Xi / 2). sigma is the
/// standard error sqrt(f (1 - f) / samples). Samples are drawn in fixed
/// chunks from Stream(seed).split("chernoff").split(chunk), so the counts do
/// not depend on the thread count.
ChernoffReport chernoff_check(const Vector& weights, const Vector& probs, double delta, long samples,
                              std::uint64_t seed);
ChernoffReport chernoff_check_serial(const Vector& weights, const Vector& probs, double delta, long samples,
                                     std::uint64_t seed);

std::string chernoff_csv(const ChernoffReport& report, const ChernoffParams& params, std::uint64_t seed);

struct PdbRow {
  Index n = 0;
  Index m = 0;
  std::uint64_t seed = 0;
  double z_lp_pdb = kNaN;
  double objective = kNaN;
  bool found_feasible = false;
  bool meets_threshold = false;
  bool near_integral = false;
  int iterations_used = 0;
  int best_iteration = -1;
  std::string status = "ok";
};

/// Random PdbInstance per seed (m1 = m2 = m), LP-PDB and round_pdb.
std::vector<PdbRow> run_pdb_experiment(const ExperimentConfig& config);
std::string pdb_csv(const std::vector<PdbRow>& rows);

struct ReduceRow {
  std::uint64_t seed = 0;
  int variables = 0;
  int clauses = 0;
  bool satisfiable = false;
  bool zero_witness = false;
  std::string status = "ok";
};

/// Random formula per seed; NAE satisfiability against the CDB zero witness.
std::vector<ReduceRow> run_reduce_experiment(const ExperimentConfig& config);
std::string reduce_csv(const std::vector<ReduceRow>& rows);

struct ExperimentOutput {
  std::string csv;
  std::string timing_csv;  // ar-vs-affine only
  bool all_ok = true;
};

/// Dispatches on config.mode.
ExperimentOutput run_experiment(const ExperimentConfig& config);

}  // namespace bilin
