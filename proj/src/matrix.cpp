#include "netident/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace netident {

namespace {
void check_finite(const std::vector<double>& data) {
  for (double v : data) {
    if (!std::isfinite(v))
      throw SpecError("DenseMatrix: non-finite entry on construction");
  }
}
}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    throw DimensionError("DenseMatrix: data length does not match rows*cols");
  check_finite(data_);
}

DenseMatrix::DenseMatrix(
    std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(0) {
  for (const auto& r : rows) {
    if (cols_ == 0) cols_ = r.size();
    if (r.size() != cols_)
      throw DimensionError("DenseMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  check_finite(data_);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double c) {
  for (double& v : data_) v *= c;
  return *this;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("multiply: inner dimensions differ");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  DenseMatrix c(m, n);
#pragma omp parallel for schedule(static) if (m >= 32)
  for (long long ii = 0; ii < static_cast<long long>(m); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a(i, p);
      if (aip == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aip * b(p, j);
    }
  }
  return c;
}

DenseMatrix DenseMatrix::multiply_serial(const DenseMatrix& a,
                                         const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("multiply: inner dimensions differ");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  DenseMatrix c(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a(i, p);
      if (aip == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aip * b(p, j);
    }
  return c;
}

std::vector<double> DenseMatrix::apply(const std::vector<double>& x) const {
  if (x.size() != cols_) throw DimensionError("apply: vector length mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

bool DenseMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return v == 0.0; });
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace netident
