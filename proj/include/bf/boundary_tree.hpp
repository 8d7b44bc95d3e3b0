#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "bf/metric.hpp"
#include "bf/rng.hpp"
#include "bf/stats.hpp"
#include "bf/store.hpp"
#include "bf/types.hpp"

namespace bf {

struct TreeParams {
  /// k: maximum children per node, > 1. kUnboundedChildren for k = infinity.
  std::size_t max_children = 50;
  /// Threshold on the label metric above which a training example is added.
  double epsilon = 0.0;
  LabelMetricKind label_metric = LabelMetricKind::discrete;
  PositionMetric metric = PositionMetric::euclidean();
};

/// Histograms of child counts and node depths, keyed by value.
struct TreeShape {
  std::map<std::size_t, std::size_t> fanout;
  std::map<std::size_t, std::size_t> depth;
  std::size_t root_fanout = 0;
  std::size_t max_depth = 0;
};

/// One boundary tree over a (possibly shared) ExampleStore.
///
/// A query walks down from the root. At node v the candidates are the children
/// of v, plus v itself while v has fewer than k children; the walk moves to the
/// closest candidate and stops when that is v. Ties are broken uniformly at
/// random. Training runs the same walk and, if the label at the stopping node is
/// more than epsilon away from the new label, links the example as a new child
/// of that node.
///
/// Tie-breaking inside training draws from the tree's own seeded stream, so the
/// structure is a function of (seed, params, input order). Plain queries draw
/// from a fresh stream seeded the same way on every call, which keeps them const
/// and safe to run concurrently.
class BoundaryTree {
 public:
  struct Node {
    ExampleId example;
    std::vector<NodeIndex> children;
  };

  struct QueryResult {
    NodeIndex node;
    ExampleId example;
    double distance;
  };

  struct TrainDecision {
    QueryResult nearest;
    bool add = false;
  };

  struct TrainResult {
    bool added = false;
    /// Stopping node of the embedded query; the parent of the new node if added.
    NodeIndex nearest;
    std::optional<NodeIndex> new_node;
  };

  BoundaryTree(std::shared_ptr<ExampleStore> store, TreeParams params, std::uint64_t seed);

  /// Plants the root. Throws if the tree already has one.
  NodeIndex set_root(ExampleId example);

  /// Locally closest node to y. Throws on an empty tree or a dimension mismatch.
  QueryResult query(std::span<const double> y, QueryStats* stats = nullptr) const;

  /// Query plus the add rule, without modifying the tree.
  TrainDecision evaluate(std::span<const double> y, std::span<const double> label,
                         QueryStats* stats = nullptr);

  /// Links an already stored example under parent. Throws if parent is full.
  NodeIndex link(NodeIndex parent, ExampleId example);

  /// Full training step. The example is appended to the store only if added.
  TrainResult train(std::span<const double> y, std::span<const double> label, QueryStats* stats = nullptr);

  /// Training step for an example that is already in the store.
  TrainResult train(ExampleId example, QueryStats* stats = nullptr);

  TreeShape shape() const;

  bool empty() const noexcept { return nodes_.empty(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  const Node& node(NodeIndex index) const { return nodes_.at(to_index(index)); }
  std::span<const Node> nodes() const noexcept { return nodes_; }
  const TreeParams& params() const noexcept { return params_; }
  const ExampleStore& store() const noexcept { return *store_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  QueryResult descend(std::span<const double> y, QueryStats* stats, std::optional<Rng>& ties,
                      std::uint64_t tie_seed) const;
  void check_query(std::span<const double> y) const;

  std::shared_ptr<ExampleStore> store_;
  TreeParams params_;
  std::uint64_t seed_;
  std::vector<Node> nodes_;
  std::optional<Rng> train_ties_;
};

/// Two trees are structurally identical when node arenas match example-for-example
/// and child-for-child.
bool same_structure(const BoundaryTree& a, const BoundaryTree& b) noexcept;

}  // namespace bf
