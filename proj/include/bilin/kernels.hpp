#pragma once

// Data-parallel inner loops. Each OpenMP kernel has a serial reference with
// the same floating-point operation order per output element, so the two
// produce bitwise-identical results; tests/test_kernels.cpp checks this and
// bench/bench_kernels.cpp times them against each other.

#include <cstddef>
#include <vector>

namespace bilin {

/// Row-major dense simplex tableau.
class Tableau {
 public:
  Tableau() = default;
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool operator==(const Tableau& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Gauss-Jordan pivot on (pivot_row, pivot_col): scales the pivot row to a
/// unit pivot and eliminates the column from every other row. The pivot
/// column is set to an exact unit vector.
void pivot_serial(Tableau& t, std::size_t pivot_row, std::size_t pivot_col);
void pivot_parallel(Tableau& t, std::size_t pivot_row, std::size_t pivot_col);

/// Number of OpenMP threads available (1 without OpenMP).
int max_threads();

/// Sets the OpenMP thread count; no-op without OpenMP.
void set_threads(int n);

}  // namespace bilin
