#include "bilin/reduction.hpp"

#include "bilin/error.hpp"
#include "bilin/rng.hpp"

#include <atomic>
#include <sstream>

namespace bilin {

namespace {

std::vector<std::uint64_t> clause_masks(const MnaeInstance& inst) {
  std::vector<std::uint64_t> masks;
  masks.reserve(inst.clauses().size());
  for (const auto& c : inst.clauses()) {
    std::uint64_t m = 0;
    for (int v : c) m |= std::uint64_t{1} << v;
    masks.push_back(m);
  }
  return masks;
}

bool all_nae(const std::vector<std::uint64_t>& masks, std::uint64_t a) {
  for (std::uint64_t m : masks) {
    const std::uint64_t t = a & m;
    if (t == 0 || t == m) return false;
  }
  return true;
}

void check_cap(int variables) {
  require(variables <= kMaxBruteForceVariables, ErrorCode::kTooManyVariables,
          std::to_string(variables) + " variables exceeds the brute-force cap of " +
              std::to_string(kMaxBruteForceVariables));
}

bool covers(const CdbInstance& cdb, const Vector& v) {
  return ((cdb.incidence * v).array() >= 1.0).all();
}

}  // namespace

MnaeInstance::MnaeInstance(int variables, std::vector<Clause> clauses)
    : variables_(variables), clauses_(std::move(clauses)) {
  require(variables >= 1, ErrorCode::kInvalidArgument, "formula needs at least one variable");
  require(variables <= 63, ErrorCode::kTooManyVariables, "at most 63 variables are representable");
  for (std::size_t c = 0; c < clauses_.size(); ++c) {
    for (int v : clauses_[c]) {
      require(v >= 0 && v < variables, ErrorCode::kInvalidArgument,
              "clause " + std::to_string(c + 1) + " uses a variable out of range");
    }
  }
}

CdbInstance reduce(const MnaeInstance& inst) {
  Matrix a = Matrix::Zero(static_cast<Index>(inst.clauses().size()), inst.variables());
  for (std::size_t c = 0; c < inst.clauses().size(); ++c) {
    for (int v : inst.clauses()[c]) a(static_cast<Index>(c), v) = 1.0;
  }
  return {std::move(a)};
}

bool nae_satisfied_by(const MnaeInstance& inst, std::uint64_t assignment) {
  return all_nae(clause_masks(inst), assignment);
}

bool nae_satisfiable_serial(const MnaeInstance& inst) {
  check_cap(inst.variables());
  const auto masks = clause_masks(inst);
  const std::uint64_t total = std::uint64_t{1} << inst.variables();
  for (std::uint64_t a = 0; a < total; ++a) {
    if (all_nae(masks, a)) return true;
  }
  return false;
}

bool nae_satisfiable(const MnaeInstance& inst) {
  check_cap(inst.variables());
  const auto masks = clause_masks(inst);
  const int v = inst.variables();
  // Split on the top bits; each block of 2^low assignments is scanned serially.
  const int low = v > 10 ? v - 10 : 0;
  const std::int64_t blocks = std::int64_t{1} << (v - low);
  const std::uint64_t block_size = std::uint64_t{1} << low;
  std::atomic<bool> found{false};
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < blocks; ++b) {
    if (found.load(std::memory_order_relaxed)) continue;
    const std::uint64_t base = static_cast<std::uint64_t>(b) << low;
    for (std::uint64_t k = 0; k < block_size; ++k) {
      if (all_nae(masks, base | k)) {
        found.store(true, std::memory_order_relaxed);
        break;
      }
    }
  }
  return found.load();
}

std::optional<CdbPair> cdb_zero_witness(const CdbInstance& cdb, const std::vector<bool>& assignment) {
  require(static_cast<Index>(assignment.size()) == cdb.variables(), ErrorCode::kDimensionMismatch,
          "assignment length must equal the variable count");
  Vector x(cdb.variables());
  for (Index v = 0; v < x.size(); ++v) x[v] = assignment[static_cast<std::size_t>(v)] ? 1.0 : 0.0;
  Vector y = Vector::Ones(x.size()) - x;
  if (!covers(cdb, x) || !covers(cdb, y)) return std::nullopt;
  return CdbPair{std::move(x), std::move(y)};
}

std::optional<std::vector<bool>> find_zero_witness(const CdbInstance& cdb) {
  check_cap(static_cast<int>(cdb.variables()));
  const auto v = static_cast<std::size_t>(cdb.variables());
  std::vector<bool> assignment(v);
  const std::uint64_t total = std::uint64_t{1} << v;
  for (std::uint64_t a = 0; a < total; ++a) {
    for (std::size_t i = 0; i < v; ++i) assignment[i] = (a >> i) & 1U;
    if (cdb_zero_witness(cdb, assignment)) return assignment;
  }
  return std::nullopt;
}

std::optional<CdbPair> round_zero_solution(const CdbInstance& cdb, const Vector& x, const Vector& y, double tol) {
  require(x.size() == cdb.variables() && y.size() == cdb.variables(), ErrorCode::kDimensionMismatch,
          "x and y must have one entry per variable");
  require(x.minCoeff() >= -tol && y.minCoeff() >= -tol, ErrorCode::kPreconditionViolated, "x and y must be >= 0");
  require(((cdb.incidence * x).array() >= 1.0 - tol).all() && ((cdb.incidence * y).array() >= 1.0 - tol).all(),
          ErrorCode::kPreconditionViolated, "(x, y) must satisfy both covering systems");
  require(x.dot(y) <= tol, ErrorCode::kPreconditionViolated, "objective must be zero");
  std::vector<bool> assignment(static_cast<std::size_t>(x.size()));
  for (Index v = 0; v < x.size(); ++v) assignment[static_cast<std::size_t>(v)] = x[v] > tol;
  return cdb_zero_witness(cdb, assignment);
}

MnaeInstance random_mnae_instance(int variables, int clauses, std::uint64_t seed) {
  require(variables >= 1 && clauses >= 0, ErrorCode::kInvalidArgument, "bad formula size");
  Stream s = Stream(seed).split("instance");
  std::vector<MnaeInstance::Clause> cs(static_cast<std::size_t>(clauses));
  for (auto& c : cs) {
    for (int& v : c) v = static_cast<int>(s.uniform() * variables);
  }
  return MnaeInstance(variables, std::move(cs));
}

MnaeInstance parse_mnae(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto error = [&](const std::string& what) {
    fail(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + what);
  };
  int variables = -1;
  long expected = -1;
  std::vector<MnaeInstance::Clause> clauses;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first == "c") continue;
    if (first == "p") {
      std::string kind, extra;
      if (variables >= 0) error("duplicate header");
      if (!(ls >> kind >> variables >> expected) || kind != "mnae" || (ls >> extra))
        error("header must be 'p mnae V C'");
      if (variables < 1 || expected < 0) error("V must be positive and C non-negative");
      continue;
    }
    if (variables < 0) error("clause before the 'p mnae' header");
    std::vector<long> vals;
    std::istringstream cl(line);
    std::string tok;
    while (cl >> tok) {
      std::size_t used = 0;
      long v = 0;
      try {
        v = std::stol(tok, &used);
      } catch (const std::exception&) {
        error("bad variable index '" + tok + "'");
      }
      if (used != tok.size()) error("bad variable index '" + tok + "'");
      vals.push_back(v);
    }
    if (vals.size() == 4 && vals.back() == 0) vals.pop_back();
    if (vals.size() != 3) error("a clause needs exactly three variables");
    MnaeInstance::Clause c{};
    for (std::size_t k = 0; k < 3; ++k) {
      if (vals[k] < 1 || vals[k] > variables) error("variable index out of range");
      c[k] = static_cast<int>(vals[k] - 1);
    }
    clauses.push_back(c);
  }
  if (variables < 0) fail(ErrorCode::kParseError, "missing 'p mnae V C' header");
  if (static_cast<long>(clauses.size()) != expected)
    fail(ErrorCode::kParseError,
         "header promises " + std::to_string(expected) + " clauses, found " + std::to_string(clauses.size()));
  return MnaeInstance(variables, std::move(clauses));
}

std::string write_mnae(const MnaeInstance& inst) {
  std::ostringstream os;
  os << "p mnae " << inst.variables() << ' ' << inst.clauses().size() << '\n';
  for (const auto& c : inst.clauses()) os << c[0] + 1 << ' ' << c[1] + 1 << ' ' << c[2] + 1 << '\n';
  return os.str();
}

std::string write_cdb(const CdbInstance& cdb) {
  std::ostringstream os;
  os << "format_version: 1\nkind: cdb\nmatrix A " << cdb.clauses() << ' ' << cdb.variables() << '\n';
  for (Index c = 0; c < cdb.clauses(); ++c) {
    for (Index v = 0; v < cdb.variables(); ++v) os << (v ? " " : "") << cdb.incidence(c, v);
    os << '\n';
  }
  os << "vector e " << cdb.clauses() << '\n';
  for (Index c = 0; c < cdb.clauses(); ++c) os << (c ? " " : "") << 1;
  os << '\n';
  return os.str();
}

}  // namespace bilin
