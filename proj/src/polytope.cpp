#include "bilin/polytope.hpp"

#include "bilin/error.hpp"

#include <algorithm>
#include <cmath>

namespace bilin {

PackingPolytope::PackingPolytope(Matrix matrix, Vector rhs, MatrixSign sign)
    : matrix_(std::move(matrix)), rhs_(std::move(rhs)), sign_(sign) {
  require(matrix_.cols() >= 1, ErrorCode::kInvalidArgument, "polytope dimension must be at least 1");
  require(matrix_.rows() == rhs_.size(), ErrorCode::kDimensionMismatch,
          "polytope matrix has " + std::to_string(matrix_.rows()) + " rows but rhs has " +
              std::to_string(rhs_.size()) + " entries");
  require(matrix_.allFinite() && rhs_.allFinite(), ErrorCode::kInvalidArgument, "polytope data must be finite");
  require(rhs_.size() == 0 || rhs_.minCoeff() >= 0.0, ErrorCode::kInvalidArgument,
          "packing rhs must be nonnegative");
  if (sign_ == MatrixSign::kNonnegative) {
    require(matrix_.size() == 0 || matrix_.minCoeff() >= 0.0, ErrorCode::kInvalidArgument,
            "packing matrix must be nonnegative");
  }
}

PackingPolytope PackingPolytope::box(Index dim, double upper) {
  return PackingPolytope(Matrix::Identity(dim, dim), Vector::Constant(dim, upper));
}

bool CoordinateMaxima::all_finite() const { return first_unbounded() < 0; }

Index CoordinateMaxima::first_unbounded() const {
  for (std::size_t i = 0; i < finite.size(); ++i) {
    if (!finite[i]) return static_cast<Index>(i);
  }
  return -1;
}

CoordinateMaxima coordinate_maxima(const PackingPolytope& poly, const SolverTolerances& tol) {
  const Index n = poly.dim();
  LpProblem lp = LpProblem::create(Sense::kMaximize, n, poly.rows());
  lp.rows = poly.matrix();
  lp.rhs = poly.rhs();

  CoordinateMaxima out;
  out.values = Vector::Zero(n);
  out.finite.assign(static_cast<std::size_t>(n), true);
  for (Index i = 0; i < n; ++i) {
    lp.objective.setZero();
    lp.objective[i] = 1.0;
    const LpSolution s = solve_lp(lp, tol);
    if (s.status == LpStatus::kUnbounded) {
      out.values[i] = kInf;
      out.finite[static_cast<std::size_t>(i)] = false;
    } else {
      require(s.optimal(), ErrorCode::kModelError, "packing polytope reported infeasible");
      out.values[i] = std::max(0.0, s.objective);
    }
  }
  return out;
}

bool contains(const PackingPolytope& poly, const Vector& point, double tol) {
  require(point.size() == poly.dim(), ErrorCode::kDimensionMismatch,
          "point has length " + std::to_string(point.size()) + ", polytope dimension is " +
              std::to_string(poly.dim()));
  if (point.size() > 0 && point.minCoeff() < -tol) return false;
  const Vector mv = poly.matrix() * point;
  for (Index j = 0; j < poly.rows(); ++j) {
    if (mv[j] > poly.rhs()[j] + tol * (1.0 + std::abs(poly.rhs()[j]))) return false;
  }
  return true;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(acc);
}

namespace {

struct Candidate {
  std::uint64_t rank;
  Vector point;
};

// Lexicographic unranking of a k-subset of {0..n-1}.
void unrank(std::uint64_t rank, std::uint64_t n, std::uint64_t k, std::vector<std::uint64_t>& out) {
  out.resize(k);
  std::uint64_t x = 0;
  for (std::uint64_t i = 0; i < k; ++i) {
    for (;;) {
      const std::uint64_t c = binomial(n - x - 1, k - i - 1);
      if (c > rank) break;
      rank -= c;
      ++x;
    }
    out[i] = x++;
  }
}

bool next_combination(std::vector<std::uint64_t>& c, std::uint64_t n) {
  const auto k = c.size();
  std::size_t i = k;
  while (i > 0 && c[i - 1] == n - k + i - 1) --i;
  if (i == 0) return false;
  ++c[i - 1];
  for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  return true;
}

// Active set `combo` over {rows} u {nonnegativity}: indices < rows are matrix
// rows, the rest fix coordinate (index - rows) at zero.
bool basic_point(const PackingPolytope& poly, const std::vector<std::uint64_t>& combo,
                 const EnumerationOptions& opts, Vector& point) {
  const Index dim = poly.dim();
  const auto rows = static_cast<std::uint64_t>(poly.rows());
  std::vector<Index> active_rows;
  std::vector<bool> fixed(static_cast<std::size_t>(dim), false);
  for (auto c : combo) {
    if (c < rows) active_rows.push_back(static_cast<Index>(c));
    else fixed[static_cast<std::size_t>(c - rows)] = true;
  }
  std::vector<Index> free;
  for (Index j = 0; j < dim; ++j) {
    if (!fixed[static_cast<std::size_t>(j)]) free.push_back(j);
  }
  point = Vector::Zero(dim);
  const auto k = static_cast<Index>(active_rows.size());
  if (k > 0) {
    Eigen::MatrixXd a(k, k);
    Eigen::VectorXd b(k);
    for (Index r = 0; r < k; ++r) {
      for (Index c = 0; c < k; ++c) a(r, c) = poly.matrix()(active_rows[static_cast<std::size_t>(r)], free[static_cast<std::size_t>(c)]);
      b[r] = poly.rhs()[active_rows[static_cast<std::size_t>(r)]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-11);
    if (!lu.isInvertible()) return false;
    const Eigen::VectorXd v = lu.solve(b);
    for (Index c = 0; c < k; ++c) point[free[static_cast<std::size_t>(c)]] = v[c];
  }
  if (!point.allFinite() || !contains(poly, point, opts.feas_tol)) return false;
  for (Index j = 0; j < dim; ++j) {
    if (point[j] < 0.0) point[j] = 0.0;
  }
  return true;
}

std::vector<Candidate> scan_range(const PackingPolytope& poly, const EnumerationOptions& opts,
                                  std::uint64_t begin, std::uint64_t end) {
  std::vector<Candidate> found;
  if (begin >= end) return found;
  const auto n = static_cast<std::uint64_t>(poly.rows() + poly.dim());
  const auto k = static_cast<std::uint64_t>(poly.dim());
  std::vector<std::uint64_t> combo;
  unrank(begin, n, k, combo);
  Vector point;
  for (std::uint64_t r = begin; r < end; ++r) {
    if (basic_point(poly, combo, opts, point)) found.push_back({r, point});
    if (r + 1 < end) next_combination(combo, n);
  }
  return found;
}

std::uint64_t checked_candidate_count(const PackingPolytope& poly, const EnumerationOptions& opts) {
  const auto total = binomial(static_cast<std::uint64_t>(poly.rows() + poly.dim()),
                              static_cast<std::uint64_t>(poly.dim()));
  require(total <= opts.cap, ErrorCode::kEnumerationTooLarge,
          std::to_string(total) + " basis candidates exceed the enumeration cap of " + std::to_string(opts.cap));
  return total;
}

std::vector<Vector> deduplicate(const std::vector<Candidate>& found, double tol) {
  std::vector<Vector> out;
  for (const auto& c : found) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Vector& v) {
      return (v - c.point).lpNorm<Eigen::Infinity>() <= tol;
    });
    if (!seen) out.push_back(c.point);
  }
  return out;
}

}  // namespace

std::vector<Vector> enumerate_vertices_serial(const PackingPolytope& poly, const EnumerationOptions& opts) {
  const auto total = checked_candidate_count(poly, opts);
  return deduplicate(scan_range(poly, opts, 0, total), opts.dedup_tol);
}

std::vector<Vector> enumerate_vertices(const PackingPolytope& poly, const EnumerationOptions& opts) {
  const auto total = checked_candidate_count(poly, opts);
  constexpr std::uint64_t kChunk = 4096;
  const auto chunks = static_cast<long>((total + kChunk - 1) / kChunk);
  std::vector<std::vector<Candidate>> parts(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic)
  for (long c = 0; c < chunks; ++c) {
    const auto begin = static_cast<std::uint64_t>(c) * kChunk;
    parts[static_cast<std::size_t>(c)] = scan_range(poly, opts, begin, std::min(total, begin + kChunk));
  }
  std::vector<Candidate> found;
  for (auto& p : parts) {
    for (auto& c : p) found.push_back(std::move(c));
  }
  return deduplicate(found, opts.dedup_tol);
}

}  // namespace bilin
