#include "bf/scaling.hpp"

#include <string>

#include "bf/artificial_tree.hpp"
#include "bf/boundary_forest.hpp"
#include "bf/eval.hpp"

namespace bf {

namespace {

constexpr std::uint64_t kQueryStream = 0x5155;

}  // namespace

std::vector<CheckpointMeasurement> measure_retrieval(const ScalingOptions& options, const SyntheticSource& source) {
  if (options.checkpoints.empty()) throw Error("measure_retrieval: no checkpoints");
  for (std::size_t i = 0; i < options.checkpoints.size(); ++i) {
    if (options.checkpoints[i] < options.n_trees) throw Error("measure_retrieval: checkpoint below n_T");
    if (i > 0 && options.checkpoints[i] <= options.checkpoints[i - 1]) {
      throw Error("measure_retrieval: checkpoints must be strictly increasing");
    }
  }
  if (options.queries_per_checkpoint == 0) throw Error("measure_retrieval: need at least one query");

  ForestConfig config;
  config.mode = TaskMode::retrieval();
  config.n_trees = options.n_trees;
  config.max_children = options.max_children;
  config.seed = options.seed;
  config.threads = options.threads;

  SyntheticStream train_stream(source);
  SyntheticStream query_stream(source.reseeded(derive_seed(source.seed, kQueryStream)));
  const std::size_t dim = train_stream.dim();
  BoundaryForest forest(config, dim, 0);

  std::vector<double> point(dim);
  std::vector<double> queries(options.queries_per_checkpoint * dim);
  std::vector<CheckpointMeasurement> out;
  std::size_t seen = 0;
  for (std::size_t checkpoint : options.checkpoints) {
    for (; seen < checkpoint; ++seen) {
      train_stream.next(point);
      forest.train(point);
    }
    for (std::size_t q = 0; q < options.queries_per_checkpoint; ++q) {
      query_stream.next(std::span(queries).subspan(q * dim, dim));
    }
    QueryStats stats;
    std::vector<ExampleId> answers;
    answers.reserve(options.queries_per_checkpoint);
    for (std::size_t q = 0; q < options.queries_per_checkpoint; ++q) {
      answers.push_back(*forest.query(std::span(queries).subspan(q * dim, dim), &stats).example);
    }
    CheckpointMeasurement m;
    m.n = checkpoint;
    m.mean_comparisons = static_cast<double>(stats.metric_comparisons) /
                         static_cast<double>(options.n_trees * options.queries_per_checkpoint);
    if (options.measure_fraction) {
      std::size_t next = 0;
      m.f = retrieval_fraction(forest.store(), queries, [&](std::span<const double>) { return answers[next++]; },
                               options.percentile)
                .f;
    }
    out.push_back(m);
  }
  return out;
}

ScalingCurve measure_scaling(const ScalingOptions& options, const SyntheticSource& source) {
  ScalingCurve curve;
  for (const auto& m : measure_retrieval(options, source)) {
    curve.points.push_back({static_cast<double>(m.n), m.mean_comparisons});
  }
  return curve;
}

std::vector<DimensionPoint> dimension_sweep(const std::vector<std::size_t>& dims, std::size_t n, std::uint64_t seed,
                                            std::size_t queries_per_checkpoint, std::size_t first_checkpoint) {
  if (n < first_checkpoint) throw Error("dimension_sweep: N below the first checkpoint");
  std::vector<DimensionPoint> out;
  for (std::size_t d : dims) {
    if (d == 0) throw Error("dimension_sweep: D must be >= 1");
    ScalingOptions options;
    options.n_trees = 1;
    options.max_children = kUnboundedChildren;
    options.seed = derive_seed(seed, d);
    options.checkpoints = log_checkpoints(first_checkpoint, n, 10);
    options.queries_per_checkpoint = queries_per_checkpoint;
    DimensionPoint p;
    p.dim = d;
    p.curve = measure_scaling(options, SyntheticSource::hypercube(d, derive_seed(seed, 1000 + d)));
    p.alpha = fit_family(p.curve, FitFamily::power, p.curve.size()).coefficients[1];
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace bf
