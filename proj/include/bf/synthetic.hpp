#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "bf/eval.hpp"
#include "bf/rng.hpp"

namespace bf {

struct GaussianComponent {
  std::vector<double> mean;
  /// Row-major D x D covariance; must be symmetric positive semi-definite.
  std::vector<double> covariance;
  double weight = 1.0;
};

struct HypercubeSource {
  std::size_t dim = 0;
};

struct GaussianMixtureSource {
  std::vector<GaussianComponent> components;
};

/// Seeded description of a synthetic distribution.
struct SyntheticSource {
  std::variant<HypercubeSource, GaussianMixtureSource> kind;
  std::uint64_t seed = 0;

  static SyntheticSource hypercube(std::size_t dim, std::uint64_t seed) { return {HypercubeSource{dim}, seed}; }
  static SyntheticSource mixture(std::vector<GaussianComponent> components, std::uint64_t seed) {
    return {GaussianMixtureSource{std::move(components)}, seed};
  }

  std::size_t dim() const;
  /// Same distribution, different seed.
  SyntheticSource reseeded(std::uint64_t new_seed) const {
    SyntheticSource copy = *this;
    copy.seed = new_seed;
    return copy;
  }
};

/// Endless sample stream for a source. Validates the source on construction.
class SyntheticStream {
 public:
  explicit SyntheticStream(const SyntheticSource& source);

  std::size_t dim() const noexcept { return dim_; }

  /// Writes one sample into out (length dim()). Returns the mixture component
  /// it came from (always 0 for the hypercube).
  std::size_t next(std::span<double> out);

 private:
  struct Factor {
    std::vector<double> mean;
    std::vector<double> lower;  // Cholesky factor, row-major
  };

  std::size_t dim_ = 0;
  bool hypercube_ = true;
  std::vector<Factor> factors_;
  std::vector<double> cumulative_weights_;
  std::vector<double> scratch_;
  Rng rng_;
};

/// n samples, row-major, deterministic given the source seed.
std::vector<double> generate(const SyntheticSource& source, std::size_t n);

/// n samples labelled by mixture component.
ClassifiedSet generate_labelled(const SyntheticSource& source, std::size_t n);

/// Lower-triangular L with L L^T = covariance, tolerating zero-variance
/// directions. Throws if the matrix is not symmetric positive semi-definite.
std::vector<double> psd_cholesky(std::span<const double> covariance, std::size_t dim);

}  // namespace bf

namespace bf {

/// Mixture of `count` Gaussians with means uniform in [0,1]^dim, random
/// orientation (covariance A A^T for a Gaussian A) and random overall size.
/// Weights are equal.
SyntheticSource random_mixture(std::size_t dim, std::size_t count, std::uint64_t seed);

}  // namespace bf
