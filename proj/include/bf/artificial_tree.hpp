#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bf/fit.hpp"
#include "bf/rng.hpp"
#include "bf/types.hpp"

namespace bf {

/// Metric-free model of a boundary tree in which every example is equidistant
/// from every other. A walk at a node with q children stops there with
/// probability 1/(q+1) and otherwise moves to a uniformly random child; a node
/// with k children cannot be stopped at. Each insertion walks, stops, and
/// attaches a new child.
struct ArtificialTreeOptions {
  std::size_t insertions = 1;
  std::size_t max_children = kUnboundedChildren;
  std::uint64_t seed = 0;
  /// Curve checkpoints (strictly increasing, <= insertions). Empty means
  /// log-spaced, 10 per decade, from 1 to `insertions`.
  std::vector<std::size_t> checkpoints;
  /// Walks that only measure cost, run at each checkpoint without inserting.
  std::size_t probes_per_checkpoint = 200;
  /// Fraction of the final insertions averaged into tail_mean_comparisons.
  double tail_fraction = 0.01;
};

struct ArtificialTreeResult {
  /// Mean comparisons per probe walk at each checkpoint.
  ScalingCurve curve;
  std::map<std::size_t, std::size_t> fanout;
  std::size_t node_count = 0;
  std::size_t root_fanout = 0;
  std::size_t max_fanout = 0;
  /// Mean comparisons of the last ceil(tail_fraction * N) insertions, and the
  /// mean N over those insertions.
  double tail_mean_comparisons = 0.0;
  double tail_mean_n = 0.0;
  /// Comparisons of the very first insertion.
  std::uint64_t first_insertion_comparisons = 0;
  /// Insertion count at which the root reached k children, if it did.
  std::optional<std::size_t> root_saturated_at;
};

/// Comparisons are counted the way a boundary-tree query counts them: a visited
/// node with q children costs q, plus 1 if it is still allowed to stop (q < k).
ArtificialTreeResult artificial_tree_sim(const ArtificialTreeOptions& options);

/// Roughly `per_decade` log-spaced integers from first to last inclusive, deduplicated.
std::vector<std::size_t> log_checkpoints(std::size_t first, std::size_t last, std::size_t per_decade);

}  // namespace bf

namespace bf {

/// Cost of one probe walk in an artificial tree with finite k that has received
/// `insertions` examples, sampled without building the tree.
///
/// What happens at a node depends only on the arrivals that reach it. So the
/// walk replays each visited node's arrivals until the node saturates (at most
/// about k^2/2 of them), then hands the remaining arrivals to the chosen child
/// as a Binomial(remaining, 1/k) share. The cost per probe is O(k^2 * depth),
/// independent of N, which makes horizons far beyond what the full
/// simulation can hold in memory reachable.
std::uint64_t sample_probe_cost(std::uint64_t insertions, std::size_t max_children, Rng& rng);

/// Mean probe cost at each checkpoint, `probes` samples per checkpoint.
/// Checkpoints must be strictly increasing and >= 1; k must be finite.
ScalingCurve artificial_probe_curve(const std::vector<double>& checkpoints, std::size_t max_children,
                                    std::size_t probes, std::uint64_t seed);

}  // namespace bf
