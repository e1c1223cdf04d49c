#include "bilin/error.hpp"
#include "bilin/reduction.hpp"
#include "bilin/rng.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace bilin;

namespace {

// Independent check: backtracking over assignments, clause values collected as sets.
bool oracle_nae(const MnaeInstance& f, std::vector<int>& assign, int v) {
  for (const auto& c : f.clauses()) {
    std::set<int> seen;
    bool complete = true;
    for (int x : c) {
      if (x >= v) complete = false;
      else seen.insert(assign[static_cast<std::size_t>(x)]);
    }
    if (complete && seen.size() < 2) return false;
  }
  if (v == f.variables()) return true;
  for (int b : {0, 1}) {
    assign[static_cast<std::size_t>(v)] = b;
    if (oracle_nae(f, assign, v + 1)) return true;
  }
  return false;
}

bool oracle_nae(const MnaeInstance& f) {
  std::vector<int> assign(static_cast<std::size_t>(f.variables()));
  return oracle_nae(f, assign, 0);
}

MnaeInstance formula(int v, std::vector<MnaeInstance::Clause> one_based) {
  for (auto& c : one_based) {
    for (int& x : c) x -= 1;
  }
  return MnaeInstance(v, std::move(one_based));
}

}  // namespace

TEST(Reduce, IncidenceExamples) {
  EXPECT_EQ(reduce(formula(3, {{1, 2, 3}})).incidence, Matrix::Ones(1, 3));
  Matrix two(2, 4);
  two << 1, 1, 1, 0, 1, 1, 0, 1;
  EXPECT_EQ(reduce(formula(4, {{1, 2, 3}, {1, 2, 4}})).incidence, two);
  Matrix dup(1, 4);
  dup << 1, 1, 0, 0;
  EXPECT_EQ(reduce(formula(4, {{1, 1, 2}})).incidence, dup);
}

TEST(Reduce, RejectsBadFormulas) {
  EXPECT_THROW(MnaeInstance(0, {}), Error);
  EXPECT_THROW(formula(3, {{1, 2, 4}}), Error);
}

TEST(NaeSatisfiable, Examples) {
  EXPECT_TRUE(nae_satisfiable(formula(3, {{1, 2, 3}})));
  EXPECT_FALSE(nae_satisfiable(formula(3, {{1, 1, 1}})));
  EXPECT_FALSE(nae_satisfiable(formula(2, {{1, 1, 2}, {1, 2, 2}, {1, 1, 1}})));
  // Triangle of 2-clauses forces a 2-coloring of an odd cycle.
  EXPECT_FALSE(nae_satisfiable(formula(3, {{1, 1, 2}, {2, 2, 3}, {1, 3, 3}})));
  EXPECT_TRUE(nae_satisfied_by(formula(3, {{1, 2, 3}}), 0b001));
  EXPECT_FALSE(nae_satisfied_by(formula(3, {{1, 2, 3}}), 0b111));
}

TEST(NaeSatisfiable, CapEnforced) {
  const auto big = random_mnae_instance(kMaxBruteForceVariables + 1, 3, 0);
  try {
    nae_satisfiable(big);
    FAIL() << "expected TooManyVariables";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooManyVariables);
  }
  EXPECT_THROW(find_zero_witness(reduce(big)), Error);
}

TEST(ZeroWitness, Examples) {
  const auto cdb = reduce(formula(3, {{1, 2, 3}}));
  const auto w = cdb_zero_witness(cdb, {true, false, false});
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->first, Vector::Unit(3, 0));
  EXPECT_EQ(w->second, (Vector(3) << 0, 1, 1).finished());
  EXPECT_DOUBLE_EQ(w->first.dot(w->second), 0.0);
  EXPECT_FALSE(cdb_zero_witness(cdb, {true, true, true}).has_value());
  EXPECT_THROW(cdb_zero_witness(cdb, {true}), Error);
}

TEST(ZeroWitness, EquivalenceByExhaustion) {
  // Ratio clauses/variables around the NAE threshold gives both outcomes.
  int sat = 0, trials = 0;
  for (int v = 3; v <= 12; ++v) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const int c = 1 + static_cast<int>(mix64(seed * 131 + static_cast<std::uint64_t>(v)) % (3 * v));
      const auto f = random_mnae_instance(v, c, seed);
      const bool expected = oracle_nae(f);
      EXPECT_EQ(nae_satisfiable(f), expected);
      EXPECT_EQ(nae_satisfiable_serial(f), expected);
      const auto cdb = reduce(f);
      const auto w = find_zero_witness(cdb);
      EXPECT_EQ(w.has_value(), expected) << write_mnae(f);
      if (w) {
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < w->size(); ++i) mask |= std::uint64_t{(*w)[i]} << i;
        EXPECT_TRUE(nae_satisfied_by(f, mask));
      }
      sat += expected;
      ++trials;
    }
  }
  EXPECT_GT(sat, 0);
  EXPECT_LT(sat, trials);
}

TEST(ZeroWitness, EveryAssignmentAgrees) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto f = random_mnae_instance(8, 6, seed);
    const auto cdb = reduce(f);
    for (std::uint64_t a = 0; a < 256; ++a) {
      std::vector<bool> assign(8);
      for (int i = 0; i < 8; ++i) assign[static_cast<std::size_t>(i)] = (a >> i) & 1U;
      EXPECT_EQ(cdb_zero_witness(cdb, assign).has_value(), nae_satisfied_by(f, a));
    }
  }
}

TEST(ZeroWitness, FractionalZeroSolutionsRound) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto f = random_mnae_instance(9, 8, seed);
    const auto cdb = reduce(f);
    const auto w = find_zero_witness(cdb);
    if (!w) continue;
    // Spread fractional mass over the true (for x) and false (for y) variables,
    // then rescale so both covering systems hold.
    Stream s = Stream(seed).split("fractional");
    Vector x = Vector::Zero(9), y = Vector::Zero(9);
    for (Index v = 0; v < 9; ++v) {
      const double u = 0.05 + s.uniform();
      ((*w)[static_cast<std::size_t>(v)] ? x : y)[v] = u;
    }
    const double cx = (cdb.incidence * x).minCoeff();
    const double cy = (cdb.incidence * y).minCoeff();
    ASSERT_GT(cx, 0.0);
    ASSERT_GT(cy, 0.0);
    x /= cx;
    y /= cy;
    const auto r = round_zero_solution(cdb, x, y);
    ASSERT_TRUE(r.has_value());
    EXPECT_DOUBLE_EQ(r->first.dot(r->second), 0.0);
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(ZeroWitness, RoundingRejectsNonZeroPoints) {
  const auto cdb = reduce(formula(3, {{1, 2, 3}}));
  EXPECT_THROW(round_zero_solution(cdb, Vector::Ones(3), Vector::Ones(3)), Error);
  EXPECT_THROW(round_zero_solution(cdb, Vector::Zero(3), Vector::Ones(3)), Error);
}

TEST(MnaeFormat, RoundTripAndErrors) {
  const auto f = random_mnae_instance(7, 5, 3);
  const auto back = parse_mnae(write_mnae(f));
  EXPECT_EQ(back.variables(), 7);
  EXPECT_EQ(back.clauses(), f.clauses());
  const auto g = parse_mnae("c demo\np mnae 4 2\n1 2 3 0\n\n1 2 4\n");
  EXPECT_EQ(reduce(g).incidence.rows(), 2);
  for (const char* bad : {"1 2 3\n", "p mnae 3 1\n1 2\n", "p mnae 3 1\n1 2 4\n", "p mnae 3 2\n1 2 3\n",
                          "p cnf 3 1\n1 2 3\n", "p mnae 3 1\n1 x 3\n", ""}) {
    EXPECT_THROW(parse_mnae(bad), Error) << bad;
  }
}
