#include "bilin/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bilin {
namespace {

// Indices of the nonzero entries of the (already scaled) pivot row.
std::vector<std::size_t> scale_pivot_row(Tableau& t, std::size_t pr, std::size_t pc) {
  double* prow = t.row(pr);
  const double inv = 1.0 / prow[pc];
  std::vector<std::size_t> nz;
  nz.reserve(t.cols());
  for (std::size_t j = 0; j < t.cols(); ++j) {
    if (prow[j] != 0.0) {
      prow[j] *= inv;
      nz.push_back(j);
    }
  }
  prow[pc] = 1.0;
  return nz;
}

// Dense rows go through a contiguous loop the compiler can vectorize.
// Subtracting f * 0 leaves an entry unchanged, so both paths agree.
inline bool use_dense(const std::vector<std::size_t>& nz, std::size_t cols) { return 4 * nz.size() > cols; }

inline void eliminate_row(double* row, const double* prow, const std::vector<std::size_t>& nz,
                          std::size_t pc, std::size_t cols, bool dense) {
  const double f = row[pc];
  if (f == 0.0) return;
  if (dense) {
#pragma omp simd
    for (std::size_t j = 0; j < cols; ++j) row[j] -= f * prow[j];
  } else {
    for (std::size_t j : nz) row[j] -= f * prow[j];
  }
  row[pc] = 0.0;
}

}  // namespace

void pivot_serial(Tableau& t, std::size_t pr, std::size_t pc) {
  const auto nz = scale_pivot_row(t, pr, pc);
  const double* prow = t.row(pr);
  const bool dense = use_dense(nz, t.cols());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (i != pr) eliminate_row(t.row(i), prow, nz, pc, t.cols(), dense);
  }
}

void pivot_parallel(Tableau& t, std::size_t pr, std::size_t pc) {
  const auto nz = scale_pivot_row(t, pr, pc);
  const double* prow = t.row(pr);
  const auto rows = static_cast<long>(t.rows());
  const bool dense = use_dense(nz, t.cols());
  const std::size_t cols = t.cols();
#pragma omp parallel for schedule(static)
  for (long i = 0; i < rows; ++i) {
    if (static_cast<std::size_t>(i) != pr) eliminate_row(t.row(static_cast<std::size_t>(i)), prow, nz, pc, cols, dense);
  }
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace bilin
