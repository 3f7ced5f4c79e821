#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "netident/matrix.hpp"
#include "netident/rng.hpp"

using namespace netident;

TEST_CASE("construction checks finiteness") {
  CHECK_NOTHROW(DenseMatrix(2, 2, {1.0, 2.0, 3.0, 4.0}));
  CHECK_THROWS_AS(
      DenseMatrix(2, 2, {1.0, std::numeric_limits<double>::quiet_NaN(), 0.0,
                         0.0}),
      Error);
  CHECK_THROWS_AS(
      DenseMatrix(1, 2, {std::numeric_limits<double>::infinity(), 0.0}),
      Error);
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1.0, 2.0}), DimensionError);
}

TEST_CASE("identity and transpose") {
  const DenseMatrix i3 = DenseMatrix::identity(3);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      CHECK(i3(r, c) == (r == c ? 1.0 : 0.0));

  const DenseMatrix a{{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}};
  const DenseMatrix at = a.transpose();
  CHECK(at.rows() == 2);
  CHECK(at.cols() == 3);
  CHECK(at(0, 1) == 3.0);
  CHECK(at(1, 2) == 6.0);
}

TEST_CASE("arithmetic operators") {
  const DenseMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  const DenseMatrix b{{5.0, 6.0}, {7.0, 8.0}};
  const DenseMatrix s = a + b;
  CHECK(s(0, 0) == 6.0);
  CHECK(s(1, 1) == 12.0);
  const DenseMatrix d = b - a;
  CHECK(d(0, 1) == 4.0);
  const DenseMatrix c = a * 2.0;
  CHECK(c(1, 0) == 6.0);
  CHECK_THROWS_AS(a + DenseMatrix(3, 3), DimensionError);
}

TEST_CASE("multiply matches hand computation") {
  const DenseMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  const DenseMatrix b{{0.0, 1.0}, {1.0, 0.0}};
  const DenseMatrix p = a * b;
  CHECK(p(0, 0) == 2.0);
  CHECK(p(0, 1) == 1.0);
  CHECK(p(1, 0) == 4.0);
  CHECK(p(1, 1) == 3.0);
  CHECK_THROWS_AS(a * DenseMatrix(3, 2), DimensionError);
}

TEST_CASE("parallel multiply is bit-identical to the serial reference") {
  Rng rng(17);
  for (std::size_t n : {5, 33, 64, 128}) {
    DenseMatrix a(n, n), b(n, n);
    for (double& v : a.data()) v = rng.normal();
    for (double& v : b.data()) v = rng.normal();
    const DenseMatrix p = DenseMatrix::multiply(a, b);
    const DenseMatrix s = DenseMatrix::multiply_serial(a, b);
    for (std::size_t k = 0; k < n * n; ++k)
      CHECK(p.data()[k] == s.data()[k]);
  }
}

TEST_CASE("apply") {
  const DenseMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  const std::vector<double> y = a.apply({1.0, 1.0});
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 7.0);
  CHECK_THROWS_AS(a.apply({1.0}), DimensionError);
}

TEST_CASE("predicates") {
  DenseMatrix z(3, 3);
  CHECK(z.is_zero());
  CHECK(z.all_finite());
  CHECK(z.max_abs() == 0.0);
  z(1, 2) = -4.0;
  CHECK_FALSE(z.is_zero());
  CHECK(z.max_abs() == 4.0);
}
