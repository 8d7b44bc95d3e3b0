#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bf/boundary_forest.hpp"
#include "bf/fit.hpp"
#include "bf/report.hpp"
#include "bf/scaling.hpp"
#include "bf/synthetic.hpp"

namespace bf::cli {

struct RunConfig {
  TaskKind mode = TaskKind::classification;
  std::size_t n_trees = 50;
  std::size_t max_children = 50;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string train_path;
  std::string test_path;  // optional
  std::string out_path;   // optional per-query CSV
  bool shuffle = false;
  bool minmax = false;
  /// Also re-query the training set after the pass (classification).
  bool train_error = false;
  double percentile = 0.99;
};

/// One online pass over the training file (file order unless shuffled), then
/// evaluation on the test file.
Report run_train_eval(const RunConfig& config);

struct SourceSpec {
  std::string dist = "hypercube";  // hypercube | gaussian-mixture
  std::size_t dim = 100;
  std::size_t components = 5;
};

SyntheticSource make_source(const SourceSpec& spec, std::uint64_t seed);

struct ArtificialBench {
  std::size_t n = 1'000'000;
  std::size_t max_children = kUnboundedChildren;
  std::size_t seeds = 1;
  std::size_t probes = 200;
  std::uint64_t seed = 0;
  // For finite k, extend the curve past --n with the lazy probe sampler up to
  // this many insertions and fit the post-saturation segment on it. 0 = off.
  double horizon = 0.0;
  std::string out;  // CSV path, optional
};

/// Curve averaged over seeds, the sqrt(2N) ratios, and for finite k the
/// power-vs-log verdicts before and after the root saturates.
Report run_artificial(const ArtificialBench& bench, ScalingCurve* curve_out = nullptr);

/// Power-law exponent and fit verdicts either side of root saturation.
struct TransitionAnalysis {
  double saturation_n = 0.0;
  ScalingCurve pre;
  ScalingCurve post;
  std::optional<FitSelection> pre_selection;   // power vs logarithmic
  std::optional<FitSelection> post_selection;  // logarithmic vs power
  double pre_alpha = 0.0;
};

/// Pre-saturation: checkpoints with N <= saturation. Post-saturation:
/// N >= kPostSaturationFactor * saturation. Both come from `long_curve` when given.
/// Segments with < 6 points are not fitted.
TransitionAnalysis analyse_transition(const ScalingCurve& curve, double saturation_n,
                                      const ScalingCurve* long_curve = nullptr);
inline constexpr double kPostSaturationFactor = 4.0;

struct ScalingBench {
  SourceSpec source;
  std::size_t n_trees = 10;
  std::size_t max_children = kUnboundedChildren;
  std::size_t n = 100'000;
  std::size_t first = 100;
  std::size_t per_decade = 10;
  std::size_t queries = 100;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  /// Fit verdict on checkpoints N >= fit_from (default: whole curve).
  std::size_t fit_from = 0;
  std::string out;
};

Report run_scaling(const ScalingBench& bench, ScalingCurve* curve_out = nullptr);

struct DimSweepBench {
  std::vector<std::size_t> dims{5, 20, 100};
  std::size_t n = 100'000;
  std::size_t queries = 200;
  std::uint64_t seed = 0;
  std::string out;
};

Report run_dimsweep(const DimSweepBench& bench, std::vector<DimensionPoint>* points_out = nullptr);

struct RetrievalFBench {
  SourceSpec source;
  std::size_t n_trees = 50;
  std::size_t max_children = 50;
  std::vector<std::size_t> checkpoints{1'000, 10'000, 100'000};
  std::size_t queries = 1000;
  double percentile = 0.99;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string out;
};

Report run_retrieval_f(const RetrievalFBench& bench, std::vector<CheckpointMeasurement>* out = nullptr);

}  // namespace bf::cli
