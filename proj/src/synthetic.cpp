#include "bf/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bf {

std::size_t SyntheticSource::dim() const {
  if (const auto* cube = std::get_if<HypercubeSource>(&kind)) return cube->dim;
  const auto& mix = std::get<GaussianMixtureSource>(kind);
  if (mix.components.empty()) throw Error("gaussian mixture has no components");
  return mix.components.front().mean.size();
}

std::vector<double> psd_cholesky(std::span<const double> covariance, std::size_t dim) {
  if (covariance.size() != dim * dim) throw Error("covariance must be D x D");
  double scale = 0.0;
  for (double v : covariance) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(covariance[i * dim + j] - covariance[j * dim + i]) > tol) throw Error("covariance is not symmetric");
    }
  }

  std::vector<double> lower(dim * dim, 0.0);
  for (std::size_t j = 0; j < dim; ++j) {
    double pivot = covariance[j * dim + j];
    for (std::size_t k = 0; k < j; ++k) pivot -= lower[j * dim + k] * lower[j * dim + k];
    if (pivot < -tol) throw Error("covariance is not positive semi-definite");
    const bool degenerate = pivot <= tol;
    const double diag = degenerate ? 0.0 : std::sqrt(pivot);
    lower[j * dim + j] = diag;
    for (std::size_t i = j + 1; i < dim; ++i) {
      double residual = covariance[i * dim + j];
      for (std::size_t k = 0; k < j; ++k) residual -= lower[i * dim + k] * lower[j * dim + k];
      if (degenerate) {
        if (std::abs(residual) > 1e-9 * std::max(scale, 1.0)) throw Error("covariance is not positive semi-definite");
        lower[i * dim + j] = 0.0;
      } else {
        lower[i * dim + j] = residual / diag;
      }
    }
  }
  return lower;
}

SyntheticStream::SyntheticStream(const SyntheticSource& source) : rng_(source.seed) {
  if (const auto* cube = std::get_if<HypercubeSource>(&source.kind)) {
    if (cube->dim == 0) throw Error("hypercube dimension must be positive");
    dim_ = cube->dim;
    return;
  }
  hypercube_ = false;
  const auto& mix = std::get<GaussianMixtureSource>(source.kind);
  if (mix.components.empty()) throw Error("gaussian mixture has no components");
  dim_ = mix.components.front().mean.size();
  if (dim_ == 0) throw Error("gaussian mixture dimension must be positive");

  double total = 0.0;
  for (const auto& c : mix.components) {
    if (c.mean.size() != dim_) throw Error("gaussian mixture components disagree on dimension");
    if (!(c.weight >= 0.0)) throw Error("gaussian mixture weights must be non-negative");
    require_finite(c.mean, "gaussian mixture mean");
    require_finite(c.covariance, "gaussian mixture covariance");
    total += c.weight;
    cumulative_weights_.push_back(total);
    factors_.push_back({c.mean, psd_cholesky(c.covariance, dim_)});
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error("gaussian mixture weights must sum to 1");
  scratch_.resize(dim_);
}

std::size_t SyntheticStream::next(std::span<double> out) {
  if (out.size() != dim_) throw Error("SyntheticStream: output has wrong length");
  if (hypercube_) {
    for (double& v : out) v = rng_.uniform();
    return 0;
  }
  const double u = rng_.uniform() * cumulative_weights_.back();
  auto it = std::upper_bound(cumulative_weights_.begin(), cumulative_weights_.end(), u);
  auto component = static_cast<std::size_t>(it - cumulative_weights_.begin());
  component = std::min(component, factors_.size() - 1);

  const Factor& f = factors_[component];
  for (double& z : scratch_) z = rng_.normal();
  for (std::size_t i = 0; i < dim_; ++i) {
    double v = f.mean[i];
    for (std::size_t k = 0; k <= i; ++k) v += f.lower[i * dim_ + k] * scratch_[k];
    out[i] = v;
  }
  return component;
}

std::vector<double> generate(const SyntheticSource& source, std::size_t n) {
  if (n == 0) throw Error("generate: n must be >= 1");
  SyntheticStream stream(source);
  std::vector<double> out(n * stream.dim());
  for (std::size_t i = 0; i < n; ++i) stream.next(std::span(out).subspan(i * stream.dim(), stream.dim()));
  return out;
}

ClassifiedSet generate_labelled(const SyntheticSource& source, std::size_t n) {
  if (n == 0) throw Error("generate_labelled: n must be >= 1");
  SyntheticStream stream(source);
  ClassifiedSet set;
  set.dim = stream.dim();
  set.positions.resize(n * set.dim);
  set.classes.resize(n);
  set.n_classes = 1;
  if (const auto* mix = std::get_if<GaussianMixtureSource>(&source.kind)) set.n_classes = mix->components.size();
  for (std::size_t i = 0; i < n; ++i) {
    set.classes[i] = stream.next(std::span(set.positions).subspan(i * set.dim, set.dim));
  }
  return set;
}

}  // namespace bf

namespace bf {

SyntheticSource random_mixture(std::size_t dim, std::size_t count, std::uint64_t seed) {
  if (dim == 0 || count == 0) throw Error("random_mixture: dimension and component count must be positive");
  Rng rng(derive_seed(seed, 0x6d6978));
  std::vector<GaussianComponent> components;
  for (std::size_t c = 0; c < count; ++c) {
    GaussianComponent comp;
    comp.weight = 1.0 / static_cast<double>(count);
    comp.mean.resize(dim);
    for (double& m : comp.mean) m = rng.uniform();
    std::vector<double> a(dim * dim);
    for (double& v : a) v = rng.normal();
    // Spread between 0.01 and 0.1 per coordinate.
    const double size = 0.01 + 0.09 * rng.uniform();
    const double scale = size * size / static_cast<double>(dim);
    comp.covariance.assign(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) s += a[i * dim + k] * a[j * dim + k];
        comp.covariance[i * dim + j] = comp.covariance[j * dim + i] = s * scale;
      }
    }
    components.push_back(std::move(comp));
  }
  // Exact weights so the sum check passes for any count.
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < count; ++c) total += components[c].weight;
  components.back().weight = 1.0 - total;
  return SyntheticSource::mixture(std::move(components), seed);
}

}  // namespace bf
