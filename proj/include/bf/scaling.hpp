#pragma once

#include <cstdint>
#include <vector>

#include "bf/fit.hpp"
#include "bf/synthetic.hpp"
#include "bf/types.hpp"

namespace bf {

struct ScalingOptions {
  std::size_t n_trees = 10;
  std::size_t max_children = kUnboundedChildren;
  std::uint64_t seed = 0;
  /// Strictly increasing; each >= n_trees.
  std::vector<std::size_t> checkpoints;
  std::size_t queries_per_checkpoint = 100;
  std::size_t threads = 1;
  /// Also compute the retrieval fraction f at each checkpoint.
  bool measure_fraction = false;
  double percentile = 0.99;
};

struct CheckpointMeasurement {
  std::size_t n = 0;
  /// Mean metric comparisons per tree per held-out query.
  double mean_comparisons = 0.0;
  /// Retrieval fraction at `percentile`; 0 unless measure_fraction was set.
  double f = 0.0;
};

/// Trains a retrieval forest on a stream drawn from `source`, pausing at every
/// checkpoint to run held-out queries from an independent stream of the same
/// distribution.
std::vector<CheckpointMeasurement> measure_retrieval(const ScalingOptions& options, const SyntheticSource& source);

/// The comparison curve from measure_retrieval.
ScalingCurve measure_scaling(const ScalingOptions& options, const SyntheticSource& source);

struct DimensionPoint {
  std::size_t dim = 0;
  /// Power-law exponent fitted over the whole curve.
  double alpha = 0.0;
  ScalingCurve curve;
};

/// For each D: one retrieval tree with k = infinity on uniform hypercube data,
/// curve over log-spaced checkpoints up to n, power-law exponent.
std::vector<DimensionPoint> dimension_sweep(const std::vector<std::size_t>& dims, std::size_t n, std::uint64_t seed,
                                            std::size_t queries_per_checkpoint = 200, std::size_t first_checkpoint = 100);

}  // namespace bf
