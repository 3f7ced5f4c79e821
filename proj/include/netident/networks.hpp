#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netident/linalg.hpp"
#include "netident/matrix.hpp"

namespace netident::networks {

enum class Family { Sparse, Hub, Block, Chain, Complete, RankOne, Star };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Interaction-matrix generator parameters. weight_scale <= 0 selects the
// per-family calibrated default (see default_weight_scale).
struct NetworkSpec {
  Family family = Family::Sparse;
  std::size_t n = 25;
  double density = -1.0;  // Sparse only; < 0 means 3/n
  std::size_t blocks = 0;  // Block only; 0 means n/5
  double weight_scale = 0.0;
  std::optional<double> target_radius;
  std::uint64_t seed = 0;
};

// Edge weights calibrated at n = 25 so the family dispersion ordering
// D(Sparse) < D(Hub) < D(Block) < D(Chain) holds with D in ~[1.1, 1.8].
double default_weight_scale(Family f);

struct SpectralSummary {
  double dispersion = 0.0;  // variance of eigenvalue real parts
  double range = 0.0;       // max - min over real parts
  double radius = 0.0;      // max modulus
  std::vector<std::complex<double>> eigenvalues;
};

DenseMatrix generate(const NetworkSpec& spec);

SpectralSummary spectral_summary(const DenseMatrix& a);

// P A P' for a uniformly random permutation P.
DenseMatrix permute_similar(const DenseMatrix& a, std::uint64_t seed);

// Q A Q^-1.
DenseMatrix similarity_transform(const DenseMatrix& a, const DenseMatrix& q);

}  // namespace netident::networks
