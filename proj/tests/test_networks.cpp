#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include "netident/networks.hpp"

using namespace netident;
using namespace netident::networks;

namespace {

double eigen_set_distance(std::vector<std::complex<double>> x,
                          std::vector<std::complex<double>> y) {
  double worst = 0.0;
  for (const auto& xv : x) {
    std::size_t best = 0;
    double bd = 1e300;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double d = std::abs(xv - y[j]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    worst = std::max(worst, bd);
    y.erase(y.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return worst;
}

std::vector<double> sorted_real(const std::vector<std::complex<double>>& x) {
  std::vector<double> r;
  for (const auto& l : x) r.push_back(l.real());
  std::sort(r.begin(), r.end());
  return r;
}

}  // namespace

TEST_CASE("family names round-trip") {
  for (Family f : {Family::Sparse, Family::Hub, Family::Block, Family::Chain,
                   Family::Complete, Family::RankOne, Family::Star})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK_THROWS_AS(family_from_name("ring"), SpecError);
}

TEST_CASE("complete graph spectrum") {
  // unit off-diagonal entries: eigenvalues n-1 (once) and -1 (n-1 times);
  // generate() scales Complete by 1/(n-1), so weight_scale n-1 undoes it
  NetworkSpec spec;
  spec.family = Family::Complete;
  spec.n = 3;
  spec.weight_scale = 2.0;
  const DenseMatrix a = generate(spec);
  CHECK(a(0, 1) == doctest::Approx(1.0));
  CHECK(a(0, 0) == 0.0);
  const auto r = sorted_real(spectral_summary(a).eigenvalues);
  CHECK(r[0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(r[1] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(r[2] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("chain n=2") {
  NetworkSpec spec;
  spec.family = Family::Chain;
  spec.n = 2;
  spec.weight_scale = 0.3;
  const DenseMatrix a = generate(spec);
  CHECK(a(0, 1) == doctest::Approx(0.3));
  CHECK(a(1, 0) == doctest::Approx(0.3));
  const auto r = sorted_real(spectral_summary(a).eigenvalues);
  CHECK(r[0] == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("star spectrum") {
  // entries w/sqrt(n-1): nonzero eigenvalues are +-w, rest zero
  NetworkSpec spec;
  spec.family = Family::Star;
  spec.n = 4;
  spec.weight_scale = 0.8;
  const auto r = sorted_real(spectral_summary(generate(spec)).eigenvalues);
  CHECK(r[0] == doctest::Approx(-0.8).epsilon(1e-10));
  CHECK(r[1] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r[2] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r[3] == doctest::Approx(0.8).epsilon(1e-10));
}

TEST_CASE("zero diagonal for every family") {
  for (Family f : {Family::Sparse, Family::Hub, Family::Block, Family::Chain,
                   Family::Complete, Family::RankOne, Family::Star}) {
    NetworkSpec spec;
    spec.family = f;
    spec.n = 10;
    spec.seed = 3;
    const DenseMatrix a = generate(spec);
    for (std::size_t i = 0; i < 10; ++i) CHECK(a(i, i) == 0.0);
  }
}

TEST_CASE("generation is deterministic in the seed") {
  NetworkSpec spec;
  spec.family = Family::Sparse;
  spec.n = 20;
  spec.seed = 42;
  const DenseMatrix a = generate(spec);
  const DenseMatrix b = generate(spec);
  for (std::size_t k = 0; k < a.data().size(); ++k)
    CHECK(a.data()[k] == b.data()[k]);
  spec.seed = 43;
  const DenseMatrix c = generate(spec);
  bool same = true;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    if (a.data()[k] != c.data()[k]) same = false;
  CHECK_FALSE(same);
}

TEST_CASE("rank-one family has rank <= 1") {
  NetworkSpec spec;
  spec.family = Family::RankOne;
  spec.n = 12;
  spec.seed = 5;
  DenseMatrix a = generate(spec);
  // restore the diagonal of the outer product: a + diag makes it rank one,
  // so every 2x2 minor away from the diagonal vanishes
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = i + 1; j < 12; ++j)
      for (std::size_t k = j + 1; k < 12; ++k) {
        const double minor = a(i, j) * a(j, k) * a(k, i) -
                             a(i, k) * a(k, j) * a(j, i);
        CHECK(std::fabs(minor) < 1e-12);
      }
}

TEST_CASE("target_radius rescales exactly") {
  for (Family f : {Family::Sparse, Family::Chain, Family::Complete}) {
    NetworkSpec spec;
    spec.family = f;
    spec.n = 15;
    spec.seed = 9;
    spec.target_radius = 0.45;
    const DenseMatrix a = generate(spec);
    CHECK(std::fabs(linalg::spectral_radius(a) - 0.45) <= 1e-10);
  }
}

TEST_CASE("spec validation") {
  NetworkSpec spec;
  spec.n = 1;
  CHECK_THROWS_AS(generate(spec), SpecError);
  spec.n = 10;
  spec.density = 1.5;
  CHECK_THROWS_AS(generate(spec), SpecError);
  spec.density = -1.0;
  spec.family = Family::Block;
  spec.blocks = 3;  // does not divide 10
  CHECK_THROWS_AS(generate(spec), SpecError);
  spec.blocks = 0;
  spec.family = Family::Chain;
  spec.target_radius = -0.5;
  CHECK_THROWS_AS(generate(spec), SpecError);
}

TEST_CASE("dispersion closed forms") {
  // all eigenvalues equal -> zero dispersion
  CHECK(spectral_summary(DenseMatrix::identity(4) * 0.3).dispersion ==
        doctest::Approx(0.0).epsilon(1e-12));
  // eigenvalues {1, -1}: mean 0, variance 1
  const DenseMatrix a{{0.0, 1.0}, {1.0, 0.0}};
  const auto s = spectral_summary(a);
  CHECK(s.dispersion == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.range == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(s.radius == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("calibrated dispersion ordering at n=25") {
  auto dispersion = [](Family f) {
    NetworkSpec spec;
    spec.family = f;
    spec.n = 25;
    spec.seed = 7;
    return spectral_summary(generate(spec)).dispersion;
  };
  const double ds = dispersion(Family::Sparse);
  const double dh = dispersion(Family::Hub);
  const double db = dispersion(Family::Block);
  const double dc = dispersion(Family::Chain);
  CHECK(ds < dh);
  CHECK(dh < db);
  CHECK(db < dc);
}

TEST_CASE("permutation similarity preserves the spectrum") {
  NetworkSpec spec;
  spec.family = Family::Sparse;
  spec.n = 12;
  spec.seed = 13;
  const DenseMatrix a = generate(spec);
  const DenseMatrix p = permute_similar(a, 99);
  CHECK(eigen_set_distance(spectral_summary(a).eigenvalues,
                           spectral_summary(p).eigenvalues) <= 1e-7);
  // a permutation really happened
  bool moved = false;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    if (a.data()[k] != p.data()[k]) moved = true;
  CHECK(moved);
}

TEST_CASE("similarity_transform") {
  const DenseMatrix a{{0.0, 0.5}, {0.5, 0.0}};
  // Q = diag(2, 1): QAQ^-1 = [[0, 1], [0.25, 0]]
  const DenseMatrix q{{2.0, 0.0}, {0.0, 1.0}};
  const DenseMatrix b = similarity_transform(a, q);
  CHECK(b(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b(1, 0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(eigen_set_distance(spectral_summary(a).eigenvalues,
                           spectral_summary(b).eigenvalues) <= 1e-10);
}
