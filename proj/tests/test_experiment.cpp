#include "bilin/error.hpp"
#include "bilin/experiment.hpp"
#include "bilin/pdb.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace bilin;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

// Exact P(Bin(r, p) >= k) by summing the pmf in log space.
double binomial_tail_ge(int r, double p, int k) {
  double total = 0.0;
  for (int j = std::max(k, 0); j <= r; ++j) {
    const double logc = std::lgamma(r + 1.0) - std::lgamma(j + 1.0) - std::lgamma(r - j + 1.0);
    total += std::exp(logc + j * std::log(p) + (r - j) * std::log1p(-p));
  }
  return total;
}

ExperimentConfig ar_config(Index n, Index l, std::vector<std::uint64_t> seeds) {
  ExperimentConfig cfg;
  cfg.mode = ExperimentMode::kArVsAffine;
  cfg.n = cfg.m = n;
  cfg.L = l;
  cfg.seeds = std::move(seeds);
  return cfg;
}

}  // namespace

TEST(Median, OddEvenAndNonFinite) {
  EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_DOUBLE_EQ(median({kNaN, 5, kInf}), 5.0);
  EXPECT_TRUE(std::isnan(median({})));
}

TEST(Config, ParsesAllSections) {
  const auto cfg = parse_config(R"({
    "mode": "ar-vs-affine", "n": 5, "L": 3, "seeds": {"first": 4, "count": 3},
    "epsilon": 0.1, "output": "out.csv", "g_scale": 0.5,
    "tolerances": {"feas": 1e-8, "perturbation": 0, "max_iterations": 500}
  })");
  EXPECT_EQ(cfg.mode, ExperimentMode::kArVsAffine);
  EXPECT_EQ(cfg.n, 5);
  EXPECT_EQ(cfg.m, 5);
  EXPECT_EQ(cfg.L, 3);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{4, 5, 6}));
  EXPECT_DOUBLE_EQ(cfg.epsilon, 0.1);
  EXPECT_EQ(cfg.output, "out.csv");
  EXPECT_DOUBLE_EQ(*cfg.g_scale, 0.5);
  EXPECT_DOUBLE_EQ(cfg.tol.feas, 1e-8);
  EXPECT_DOUBLE_EQ(cfg.tol.perturbation, 0.0);
  EXPECT_EQ(cfg.tol.max_iterations, 500);

  const auto ch = parse_config(R"({"mode": "chernoff", "seeds": [9],
    "chernoff": {"r": 10, "weight": 1, "prob": 0.1, "delta": 0.5, "samples": 20000}})");
  EXPECT_EQ(ch.chernoff.r, 10);
  EXPECT_EQ(ch.chernoff.samples, 20000);
  const auto rd = parse_config(R"({"mode": "reduce", "reduce": {"variables": 6, "clauses": 9}})");
  EXPECT_EQ(rd.reduce_variables, 6);
}

TEST(Config, RejectsInvalid) {
  for (const char* bad : {
           R"({"mode": "ar-vs-affine", "n": 4, "m": 5})",
           R"({"mode": "bogus"})",
           R"({"n": 0})",
           R"({"seeds": []})",
           R"({"epsilon": 1.5})",
           R"({"colour": 1})",
           R"({"tolerances": {"feasibility": 1}})",
           R"({"mode": "chernoff", "chernoff": {"samples": 10}})",
           R"({"mode": "reduce", "reduce": {"variables": 40}})",
           R"({"n": "five"})",
           R"([1, 2])",
           "{",
       }) {
    try {
      parse_config(bad);
      ADD_FAILURE() << "accepted " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument) << bad;
    }
  }
}

TEST(Chernoff, DegenerateCase) {
  const auto rep = chernoff_check(Vector::Ones(1), Vector::Ones(1), 0.5, 10000, 0);
  EXPECT_DOUBLE_EQ(rep.expectation, 1.0);
  EXPECT_DOUBLE_EQ(rep.upper_frequency, 0.0);
  EXPECT_DOUBLE_EQ(rep.lower_frequency, 0.0);
  EXPECT_TRUE(rep.within());
}

TEST(Chernoff, BoundsMatchClosedForms) {
  const auto lower = chernoff_check(Vector::Ones(10), Vector::Constant(10, 0.1), 0.5, 10000, 1);
  EXPECT_NEAR(lower.expectation, 1.0, 1e-12);
  EXPECT_NEAR(lower.lower_bound, std::exp(-0.125), 1e-12);
  EXPECT_NEAR(lower.lower_bound, 0.8825, 5e-5);
  EXPECT_NEAR(lower.upper_bound, std::exp(0.5) / std::pow(1.5, 1.5), 1e-12);
  const double delta = zeta(100) - 1.0;
  const auto upper = chernoff_check(Vector::Ones(100), Vector::Constant(100, 0.01), delta, 10000, 1);
  EXPECT_FALSE(upper.has_lower);
  EXPECT_DOUBLE_EQ(upper.s, 1.0);
  EXPECT_NEAR(upper.upper_bound, std::pow(std::exp(delta) / std::pow(1 + delta, 1 + delta), 1.0), 1e-15);
}

TEST(Chernoff, FrequenciesMatchExactBinomial) {
  struct Case {
    int r;
    double p;
    double delta;
  };
  for (const Case c : {Case{10, 0.1, 0.5}, Case{100, 0.01, zeta(100) - 1.0}, Case{40, 0.2, 0.5}}) {
    const long n = 100000;
    const auto rep = chernoff_check(Vector::Ones(c.r), Vector::Constant(c.r, c.p), c.delta, n, 7);
    const int k_up = static_cast<int>(std::ceil(rep.upper_threshold - 1e-9));
    const double p_up = binomial_tail_ge(c.r, c.p, k_up);
    EXPECT_NEAR(rep.upper_frequency, p_up, 5.0 * std::sqrt(p_up * (1 - p_up) / n) + 1e-12);
    EXPECT_LE(p_up, rep.upper_bound);
    if (rep.has_lower) {
      const int k_lo = static_cast<int>(std::floor(rep.lower_threshold + 1e-9));
      const double p_lo = 1.0 - binomial_tail_ge(c.r, c.p, k_lo + 1);
      EXPECT_NEAR(rep.lower_frequency, p_lo, 5.0 * std::sqrt(p_lo * (1 - p_lo) / n));
      EXPECT_LE(p_lo, rep.lower_bound);
    }
    EXPECT_TRUE(rep.within());
  }
}

TEST(Chernoff, SerialMatchesParallelAndIsSeeded) {
  const Vector w = Vector::LinSpaced(30, 0.1, 1.0);
  const Vector p = Vector::Constant(30, 0.05);
  const auto a = chernoff_check(w, p, 1.5, 50000, 3);
  const auto b = chernoff_check_serial(w, p, 1.5, 50000, 3);
  EXPECT_EQ(a.upper_frequency, b.upper_frequency);
  EXPECT_EQ(chernoff_check(w, p, 1.5, 50000, 3).upper_frequency, a.upper_frequency);
  EXPECT_NE(chernoff_check(w, p, 0.5, 50000, 4).lower_frequency,
            chernoff_check(w, p, 0.5, 50000, 5).lower_frequency);
}

TEST(Chernoff, RejectsBadParameters) {
  EXPECT_THROW(chernoff_check(Vector::Ones(2), Vector::Ones(3), 0.5, 10000, 0), Error);
  EXPECT_THROW(chernoff_check(Vector::Constant(2, 1.5), Vector::Ones(2), 0.5, 10000, 0), Error);
  EXPECT_THROW(chernoff_check(Vector::Ones(2), Vector::Constant(2, -0.1), 0.5, 10000, 0), Error);
  EXPECT_THROW(chernoff_check(Vector::Ones(2), Vector::Ones(2), 0.0, 10000, 0), Error);
  EXPECT_THROW(chernoff_check(Vector::Ones(2), Vector::Ones(2), 0.5, 9999, 0), Error);
}

TEST(Benchmark, OneDimensionalRatioIsOne) {
  const auto rows = run_benchmark(ar_config(1, 1, {0, 1, 2, 3}));
  for (const auto& r : rows) {
    ASSERT_TRUE(r.ok()) << r.status;
    EXPECT_NEAR(r.ratio, 1.0, 1e-9);
    EXPECT_EQ(r.lp_ar_vars, 5);
    EXPECT_EQ(r.aff_vars, 1 + 1 + 1 + 3 * 2 + 1);
  }
}

TEST(Benchmark, CsvShapeOrderAndDeterminism) {
  const auto rows = run_benchmark(ar_config(3, 2, {5, 1, 3}));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].seed, 1u);
  EXPECT_EQ(rows[2].seed, 5u);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.ok()) << r.status;
    EXPECT_DOUBLE_EQ(r.ratio, r.z_lp_ar / r.z_aff);
    EXPECT_EQ(r.lp_ar_vars, 3 * 3 + 5);
    EXPECT_EQ(r.aff_vars, 3 + 3 + 9 + 7 * 5 + 1);
  }
  const auto csv = lines(benchmark_csv(rows));
  ASSERT_EQ(csv.size(), 5u);
  EXPECT_EQ(csv[0], "n,L,seed,z_lp_ar,z_aff,ratio,t_lp_s,t_aff_s,status");
  for (const auto& l : csv) EXPECT_EQ(fields(l).size(), 9u) << l;
  const auto summary = fields(csv.back());
  EXPECT_EQ(summary[2], "median");
  EXPECT_EQ(summary[8], "summary:3/3_ok");
  EXPECT_DOUBLE_EQ(std::stod(summary[5]), median({rows[0].ratio, rows[1].ratio, rows[2].ratio}));

  const auto again = run_benchmark(ar_config(3, 2, {3, 5, 1}));
  EXPECT_EQ(benchmark_csv(again, false), benchmark_csv(rows, false));
  EXPECT_EQ(lines(benchmark_timing_csv(rows)).size(), 4u);
}

TEST(Benchmark, FailuresAreRecordedPerRow) {
  auto cfg = ar_config(2, 1, {0, 1});
  cfg.tol.max_iterations = 1;
  const auto rows = run_benchmark(cfg);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) EXPECT_FALSE(r.ok());
  const auto csv = lines(benchmark_csv(rows));
  EXPECT_EQ(fields(csv.back())[8], "summary:0/2_ok");
  EXPECT_EQ(fields(csv.back())[5], "");
}

TEST(Experiment, PdbAndReduceModes) {
  ExperimentConfig pdb;
  pdb.mode = ExperimentMode::kPdb;
  pdb.n = 6;
  pdb.m = 4;
  pdb.seeds = {0, 1, 2};
  const auto out = run_experiment(pdb);
  EXPECT_EQ(lines(out.csv).size(), 4u);
  EXPECT_EQ(run_experiment(pdb).csv, out.csv);
  for (const auto& r : run_pdb_experiment(pdb)) {
    EXPECT_EQ(r.iterations_used, rounding_iterations(0.25));
    EXPECT_TRUE(r.near_integral);
    if (r.found_feasible) EXPECT_LE(r.objective, r.z_lp_pdb + 1e-9);
  }

  ExperimentConfig red;
  red.mode = ExperimentMode::kReduce;
  red.reduce_variables = 7;
  red.reduce_clauses = 10;
  red.seeds = {0, 1, 2, 3, 4, 5};
  const auto r = run_experiment(red);
  EXPECT_TRUE(r.all_ok);
  EXPECT_EQ(lines(r.csv).size(), 7u);

  ExperimentConfig ch;
  ch.mode = ExperimentMode::kChernoff;
  ch.chernoff = {10, 1.0, 0.1, 0.5, 20000};
  ch.seeds = {1, 2};
  const auto c = run_experiment(ch);
  EXPECT_TRUE(c.all_ok);
  EXPECT_EQ(lines(c.csv).size(), 5u);
}
