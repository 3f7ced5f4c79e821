#include "netident/networks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netident/rng.hpp"

namespace netident::networks {

std::string family_name(Family f) {
  switch (f) {
    case Family::Sparse: return "sparse";
    case Family::Hub: return "hub";
    case Family::Block: return "block";
    case Family::Chain: return "chain";
    case Family::Complete: return "complete";
    case Family::RankOne: return "rank1";
    case Family::Star: return "star";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "sparse") return Family::Sparse;
  if (name == "hub") return Family::Hub;
  if (name == "block") return Family::Block;
  if (name == "chain") return Family::Chain;
  if (name == "complete") return Family::Complete;
  if (name == "rank1" || name == "rankone") return Family::RankOne;
  if (name == "star") return Family::Star;
  throw SpecError("unknown network family: " + name);
}

double default_weight_scale(Family f) {
  switch (f) {
    case Family::Sparse: return 0.60;
    case Family::Hub: return 1.14;
    case Family::Block: return 0.57;
    case Family::Chain: return 0.94;
    case Family::Complete: return 1.0;  // divided by n-1 in generate
    case Family::RankOne: return 1.0;
    case Family::Star: return 1.0;  // divided by sqrt(n-1)
  }
  return 1.0;
}

namespace {

void validate(const NetworkSpec& spec) {
  if (spec.n < 2) throw SpecError("NetworkSpec: n must be >= 2");
  if (spec.family == Family::Sparse && spec.density > 1.0)
    throw SpecError("NetworkSpec: density must lie in [0,1]");
  if (spec.family == Family::Block) {
    const std::size_t b = spec.blocks == 0 ? std::max<std::size_t>(1, spec.n / 5)
                                           : spec.blocks;
    if (spec.n % b != 0)
      throw SpecError("NetworkSpec: blocks must divide n");
  }
  if (spec.target_radius && *spec.target_radius <= 0.0)
    throw SpecError("NetworkSpec: target_radius must be positive");
}

}  // namespace

DenseMatrix generate(const NetworkSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n;
  const double w = spec.weight_scale > 0.0 ? spec.weight_scale
                                           : default_weight_scale(spec.family);
  Rng rng(derive_seed({spec.seed, static_cast<std::uint64_t>(spec.family),
                       static_cast<std::uint64_t>(n)}));
  DenseMatrix a(n, n);

  switch (spec.family) {
    case Family::Sparse: {
      const double density =
          spec.density >= 0.0 ? spec.density
                              : std::min(1.0, 3.0 / static_cast<double>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          const double u = rng.uniform();
          const double weight = w * rng.uniform(0.5, 1.5);
          if (u < density) {
            a(i, j) = weight;
            a(j, i) = weight;
          }
        }
      break;
    }
    case Family::Hub: {
      // directed hub: strong out-edges, weaker return edges
      for (std::size_t j = 1; j < n; ++j) {
        a(0, j) = w;
        a(j, 0) = 0.5 * w;
      }
      break;
    }
    case Family::Block: {
      const std::size_t b =
          spec.blocks == 0 ? std::max<std::size_t>(1, n / 5) : spec.blocks;
      const std::size_t m = n / b;
      for (std::size_t block = 0; block < b; ++block) {
        const std::size_t off = block * m;
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j)
            if (i != j) a(off + i, off + j) = w;
      }
      break;
    }
    case Family::Chain: {
      for (std::size_t i = 0; i + 1 < n; ++i) {
        a(i, i + 1) = w;
        a(i + 1, i) = w;
      }
      break;
    }
    case Family::Complete: {
      const double v = w / static_cast<double>(n - 1);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) a(i, j) = v;
      break;
    }
    case Family::RankOne: {
      std::vector<double> vec(n);
      for (double& x : vec) x = w * rng.uniform(0.5, 1.5) / std::sqrt(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) a(i, j) = vec[i] * vec[j];
      break;
    }
    case Family::Star: {
      const double v = w / std::sqrt(static_cast<double>(n - 1));
      for (std::size_t j = 1; j < n; ++j) {
        a(0, j) = v;
        a(j, 0) = v;
      }
      break;
    }
  }

  if (spec.target_radius) {
    const double radius = linalg::spectral_radius(a);
    if (radius <= 0.0)
      throw SpecError("NetworkSpec: cannot rescale zero-radius matrix");
    a *= *spec.target_radius / radius;
  }
  return a;
}

SpectralSummary spectral_summary(const DenseMatrix& a) {
  require_square(a, "spectral_summary");
  SpectralSummary s;
  s.eigenvalues = linalg::eigen_decompose(a, false).eigenvalues;
  const std::size_t n = s.eigenvalues.size();
  double mean = 0.0, lo = s.eigenvalues[0].real(), hi = lo;
  for (const auto& l : s.eigenvalues) {
    mean += l.real();
    lo = std::min(lo, l.real());
    hi = std::max(hi, l.real());
    s.radius = std::max(s.radius, std::abs(l));
  }
  mean /= static_cast<double>(n);
  for (const auto& l : s.eigenvalues)
    s.dispersion += (l.real() - mean) * (l.real() - mean);
  s.dispersion /= static_cast<double>(n);
  s.range = hi - lo;
  return s;
}

DenseMatrix permute_similar(const DenseMatrix& a, std::uint64_t seed) {
  require_square(a, "permute_similar");
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(derive_seed({seed, 0x7065726dULL}));
  for (std::size_t i = n; i > 1; --i)
    std::swap(perm[i - 1], perm[rng.uniform_below(i)]);
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(perm[i], perm[j]) = a(i, j);
  return out;
}

DenseMatrix similarity_transform(const DenseMatrix& a, const DenseMatrix& q) {
  require_square(a, "similarity_transform");
  require_same_shape(a, q, "similarity_transform");
  return q * a * linalg::matrix_inverse(q);
}

}  // namespace netident::networks
