#include "bilin/generators.hpp"

#include "bilin/error.hpp"
#include "bilin/rng.hpp"

#include <cmath>

namespace bilin {

namespace {

Matrix gaussian(Stream stream, Index rows, Index cols, double scale) {
  Matrix g(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) g(i, j) = scale * stream.normal();
  }
  return g;
}

bool theta_finite(const Matrix& b, const Vector& d) {
  const bool is_signed = b.minCoeff() < 0.0;
  const PackingPolytope dual(b.transpose(), d,
                             is_signed ? PackingPolytope::MatrixSign::kSigned : PackingPolytope::MatrixSign::kNonnegative);
  return coordinate_maxima(dual).all_finite();
}

}  // namespace

GeneratedAr generate_ar_instance(Index n, Index budgets, std::uint64_t seed, const ArGeneratorOptions& opts) {
  require(n >= 1 && budgets >= 1, ErrorCode::kInvalidArgument, "n and L must be positive");
  const Index m = n;
  const double scale = opts.g_scale.value_or(1.0 / std::sqrt(static_cast<double>(m)));
  require(std::isfinite(scale) && scale >= 0.0, ErrorCode::kInvalidArgument, "g_scale must be finite and >= 0");
  const Stream base = Stream(seed).split("instance");

  Matrix r = Matrix::Zero(m + budgets, m);
  r.topRows(m) = Matrix::Identity(m, m);
  const Matrix w = gaussian(base.split("W"), budgets, m, 1.0);
  for (Index l = 0; l < budgets; ++l) {
    const double norm = w.row(l).norm();
    // A zero Gaussian row has probability 0; fall back to the uniform weight.
    r.row(m + l) = norm > 0.0 ? Matrix(w.row(l).cwiseAbs() / norm) : Matrix::Constant(1, m, 1.0 / std::sqrt(m));
  }
  const PackingPolytope u(r, Vector::Ones(m + budgets));
  const Vector ones = Vector::Ones(n);

  const Stream g_stream = base.split("G");
  for (int k = 0; k <= opts.max_resamples; ++k) {
    const Matrix ab = Matrix::Identity(m, n) + gaussian(g_stream.split(static_cast<std::uint64_t>(k)), m, n, scale);
    if (!theta_finite(ab, ones)) continue;
    return {ArInstance(ab, ab, ones, ones, u), k, scale};
  }
  fail(ErrorCode::kGeneratorExhausted,
       "no draw of G with finite theta after " + std::to_string(opts.max_resamples) + " resamples");
}

GeneratedPdb generate_pdb_instance(Index n, Index m1, Index m2, std::uint64_t seed) {
  require(n >= 1 && m1 >= 1 && m2 >= 1, ErrorCode::kInvalidArgument, "dimensions must be positive");
  Stream s = Stream(seed).split("instance");
  int patched = 0;
  auto block = [&](Index rows) {
    Matrix mat(rows, n);
    Vector rhs(rows);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < n; ++j) mat(i, j) = s.uniform();
    }
    for (Index i = 0; i < rows; ++i) rhs[i] = 1.0 + s.uniform();
    for (Index j = 0; j < n; ++j) {
      if (mat.col(j).maxCoeff() <= 0.0) {
        mat(static_cast<Index>(s.uniform() * static_cast<double>(rows)), j) += 1e-3;
        ++patched;
      }
    }
    return PackingPolytope(mat, rhs);
  };
  PackingPolytope x = block(m1);
  PackingPolytope y = block(m2);
  return {PdbInstance(std::move(x), std::move(y)), patched};
}

}  // namespace bilin
