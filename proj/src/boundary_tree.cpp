#include "bf/boundary_tree.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace bf {

namespace {

constexpr std::uint64_t kTrainTieStream = 0x7472;
constexpr std::uint64_t kQueryTieStream = 0x7174;

}  // namespace

BoundaryTree::BoundaryTree(std::shared_ptr<ExampleStore> store, TreeParams params, std::uint64_t seed)
    : store_(std::move(store)), params_(std::move(params)), seed_(seed) {
  if (!store_) throw Error("BoundaryTree: store is null");
  if (params_.max_children < 2) throw Error("BoundaryTree: max children k must be > 1");
  if (!(params_.epsilon >= 0.0)) throw Error("BoundaryTree: epsilon must be >= 0");
}

NodeIndex BoundaryTree::set_root(ExampleId example) {
  if (!nodes_.empty()) throw Error("BoundaryTree: root already set");
  if (to_index(example) >= store_->size()) throw Error("BoundaryTree: root id not in store");
  nodes_.push_back(Node{example, {}});
  return NodeIndex{0};
}

void BoundaryTree::check_query(std::span<const double> y) const {
  if (nodes_.empty()) throw Error("BoundaryTree: query on an empty tree");
  if (y.size() != store_->dim()) {
    throw Error("BoundaryTree: query has " + std::to_string(y.size()) + " coordinates, expected " +
                std::to_string(store_->dim()));
  }
  require_finite(y, "BoundaryTree: query");
}

BoundaryTree::QueryResult BoundaryTree::descend(std::span<const double> y, QueryStats* stats,
                                                std::optional<Rng>& ties, std::uint64_t tie_seed) const {
  const std::size_t dim = store_->dim();
  auto key_of = [&](const Node& n) { return params_.metric.key(y, std::span(store_->row(n.example), dim)); };

  std::uint64_t comparisons = 0;
  std::uint64_t steps = 0;
  std::size_t current = 0;
  double current_key = 0.0;
  for (;;) {
    const Node& n = nodes_[current];
    ++steps;
    std::size_t best = current;
    double best_key = 0.0;
    std::uint64_t tie_count = 0;
    if (n.children.size() < params_.max_children) {
      best_key = key_of(n);
      ++comparisons;
      tie_count = 1;
    }
    for (NodeIndex child : n.children) {
      const double k = key_of(nodes_[to_index(child)]);
      ++comparisons;
      if (tie_count == 0 || k < best_key) {
        best = to_index(child);
        best_key = k;
        tie_count = 1;
      } else if (k == best_key) {
        ++tie_count;
        if (!ties) ties.emplace(tie_seed);
        if (ties->below(tie_count) == 0) best = to_index(child);
      }
    }
    current_key = best_key;
    if (best == current) break;
    current = best;
  }
  if (stats) {
    stats->metric_comparisons += comparisons;
    stats->path_length += steps;
  }
  const Node& found = nodes_[current];
  return QueryResult{static_cast<NodeIndex>(current), found.example, params_.metric.key_to_distance(current_key)};
}

BoundaryTree::QueryResult BoundaryTree::query(std::span<const double> y, QueryStats* stats) const {
  check_query(y);
  std::optional<Rng> ties;
  return descend(y, stats, ties, derive_seed(seed_, kQueryTieStream));
}

BoundaryTree::TrainDecision BoundaryTree::evaluate(std::span<const double> y, std::span<const double> label,
                                                   QueryStats* stats) {
  check_query(y);
  // The training stream persists across calls; it is seeded on first use.
  std::optional<Rng>& ties = train_ties_;
  const QueryResult nearest = descend(y, stats, ties, derive_seed(seed_, kTrainTieStream));
  bool add = true;
  if (params_.label_metric != LabelMetricKind::always_far) {
    add = label_distance(params_.label_metric, label, store_->label(nearest.example)).exceeds(params_.epsilon);
  }
  return TrainDecision{nearest, add};
}

NodeIndex BoundaryTree::link(NodeIndex parent, ExampleId example) {
  if (to_index(parent) >= nodes_.size()) throw Error("BoundaryTree: unknown parent node");
  if (to_index(example) >= store_->size()) throw Error("BoundaryTree: example id not in store");
  Node& p = nodes_[to_index(parent)];
  if (p.children.size() >= params_.max_children) throw Error("BoundaryTree: parent already has k children");
  const auto index = static_cast<NodeIndex>(nodes_.size());
  p.children.push_back(index);
  nodes_.push_back(Node{example, {}});
  return index;
}

BoundaryTree::TrainResult BoundaryTree::train(std::span<const double> y, std::span<const double> label,
                                              QueryStats* stats) {
  const TrainDecision decision = evaluate(y, label, stats);
  TrainResult result{decision.add, decision.nearest.node, std::nullopt};
  if (decision.add) {
    const ExampleId id = store_->labels_alias_positions() ? store_->append(y) : store_->append(y, label);
    result.new_node = link(decision.nearest.node, id);
  }
  return result;
}

BoundaryTree::TrainResult BoundaryTree::train(ExampleId example, QueryStats* stats) {
  const DataPoint point = store_->point(example);
  const TrainDecision decision = evaluate(point.position, point.label, stats);
  TrainResult result{decision.add, decision.nearest.node, std::nullopt};
  if (decision.add) result.new_node = link(decision.nearest.node, example);
  return result;
}

TreeShape BoundaryTree::shape() const {
  TreeShape shape;
  if (nodes_.empty()) return shape;
  std::vector<std::size_t> depth(nodes_.size(), 0);
  // Children are always created after their parent, so one forward pass suffices.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    ++shape.fanout[n.children.size()];
    ++shape.depth[depth[i]];
    shape.max_depth = std::max(shape.max_depth, depth[i]);
    for (NodeIndex child : n.children) depth[to_index(child)] = depth[i] + 1;
  }
  shape.root_fanout = nodes_.front().children.size();
  return shape;
}

bool same_structure(const BoundaryTree& a, const BoundaryTree& b) noexcept {
  const auto na = a.nodes();
  const auto nb = b.nodes();
  return std::equal(na.begin(), na.end(), nb.begin(), nb.end(), [](const auto& x, const auto& y) {
    return x.example == y.example && x.children == y.children;
  });
}

}  // namespace bf
