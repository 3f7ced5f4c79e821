#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "netident/errors.hpp"

namespace netident {

// Dense real matrix, row-major. Entries are checked finite on construction
// from external data; internal arithmetic preserves finiteness for finite
// inputs.
class DenseMatrix {
 public:
  DenseMatrix() : rows_(0), cols_(0) {}

  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  DenseMatrix transpose() const;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double c);

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
    a += b;
    return a;
  }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
    a -= b;
    return a;
  }
  friend DenseMatrix operator*(DenseMatrix a, double c) {
    a *= c;
    return a;
  }
  friend DenseMatrix operator*(double c, DenseMatrix a) {
    a *= c;
    return a;
  }
  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    return multiply(a, b);
  }

  // a * b. Parallelized over rows; the accumulation order per entry is
  // identical to the serial loop, so results are bit-identical at any
  // thread count.
  static DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

  // Plain triple loop kept as the reference implementation for tests and
  // the benchmark target.
  static DenseMatrix multiply_serial(const DenseMatrix& a,
                                     const DenseMatrix& b);

  std::vector<double> apply(const std::vector<double>& x) const;

  bool all_finite() const;
  bool is_zero() const;
  double max_abs() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

inline void require_square(const DenseMatrix& m, const char* what) {
  if (!m.square())
    throw DimensionError(std::string(what) + ": matrix must be square");
}

inline void require_same_shape(const DenseMatrix& a, const DenseMatrix& b,
                               const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(what) + ": shape mismatch");
}

}  // namespace netident
