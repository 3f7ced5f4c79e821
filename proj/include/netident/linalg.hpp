#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "netident/matrix.hpp"

namespace netident::linalg {

// Eigenvalues sorted by descending modulus, ties broken by descending real
// part then descending imaginary part. When vectors are requested, column k
// of `vectors` satisfies A v_k = lambda_k v_k; columns are unit 2-norm with
// the largest-modulus component rotated to the positive real axis.
struct EigenDecomposition {
  std::size_t n = 0;
  std::vector<std::complex<double>> eigenvalues;
  bool has_vectors = false;
  std::vector<std::complex<double>> vectors;  // row-major n x n

  std::complex<double> vector(std::size_t row, std::size_t col) const {
    return vectors[row * n + col];
  }
};

// LU with partial pivoting.
class LuDecomposition {
 public:
  static LuDecomposition compute(const DenseMatrix& m);

  bool singular() const { return singular_; }
  double determinant() const;
  std::vector<double> solve(const std::vector<double>& rhs) const;
  DenseMatrix solve(const DenseMatrix& rhs) const;
  DenseMatrix inverse() const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> piv_;
  int sign_ = 1;
  bool singular_ = false;
};

EigenDecomposition eigen_decompose(const DenseMatrix& m,
                                   bool want_vectors = false,
                                   int max_iterations = 0);

double spectral_radius(const DenseMatrix& m);

// Max eigenvalue modulus (same as spectral_radius; named per the statistic
// it implements: eigenvalue modulus, not a singular value).
double spectral_abs_max(const DenseMatrix& m);

double frobenius_norm(const DenseMatrix& m);

double norm1(const DenseMatrix& m);

// Solves Sigma = B Sigma B' + Omega for stable B. Kronecker vectorization
// up to n = 64, doubling series iteration above.
DenseMatrix solve_discrete_lyapunov(const DenseMatrix& B,
                                    const DenseMatrix& Omega);

DenseMatrix matrix_inverse(const DenseMatrix& m, double rcond_floor = 1e-12);

// Lower-triangular factor L with Sigma = L L'. Tolerates semidefinite
// inputs (zero modes give zero columns); rejects clearly indefinite input.
DenseMatrix cholesky_psd(const DenseMatrix& sigma);

bool is_symmetric(const DenseMatrix& m, double tol = 1e-12);

}  // namespace netident::linalg
