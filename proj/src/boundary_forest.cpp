#include "bf/boundary_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bf/rng.hpp"

namespace bf {

namespace {

std::uint64_t tree_seed(std::uint64_t master, std::size_t tree) { return derive_seed(master, 2 * tree); }
std::uint64_t shuffle_seed(std::uint64_t master, std::size_t tree) { return derive_seed(master, 2 * tree + 1); }

LabelMetricKind label_metric_for(TaskKind kind) {
  switch (kind) {
    case TaskKind::classification: return LabelMetricKind::discrete;
    case TaskKind::regression: return LabelMetricKind::absolute_difference;
    case TaskKind::retrieval: return LabelMetricKind::always_far;
  }
  return LabelMetricKind::discrete;
}

}  // namespace

const char* task_name(TaskKind kind) noexcept {
  switch (kind) {
    case TaskKind::classification: return "classification";
    case TaskKind::regression: return "regression";
    case TaskKind::retrieval: return "retrieval";
  }
  return "unknown";
}

LabelVector shepard_estimate(std::span<const WeightedLabel> results) {
  if (results.empty()) throw Error("shepard_estimate: no results");
  const std::size_t width = results.front().label.size();
  bool any_zero = false;
  for (const auto& r : results) {
    if (r.label.size() != width) throw Error("shepard_estimate: label length mismatch");
    if (!(r.distance >= 0.0) || !std::isfinite(r.distance)) {
      throw Error("shepard_estimate: distances must be finite and non-negative");
    }
    any_zero = any_zero || r.distance == 0.0;
  }

  LabelVector estimate(width, 0.0);
  double total_weight = 0.0;
  for (const auto& r : results) {
    double weight;
    if (any_zero) {
      if (r.distance != 0.0) continue;
      weight = 1.0;
    } else {
      weight = 1.0 / r.distance;
    }
    total_weight += weight;
    for (std::size_t i = 0; i < width; ++i) estimate[i] += weight * r.label[i];
  }
  for (double& v : estimate) v /= total_weight;
  return estimate;
}

BoundaryForest::BoundaryForest(ForestConfig config, std::size_t dim, std::size_t label_dim)
    : config_(std::move(config)) {
  if (config_.n_trees < 1) throw Error("BoundaryForest: n_T must be >= 1");
  if (config_.max_children < 2) throw Error("BoundaryForest: k must be > 1");
  if (config_.mode.kind == TaskKind::regression && !(config_.mode.epsilon >= 0.0)) {
    throw Error("BoundaryForest: regression epsilon must be >= 0");
  }
  if (config_.mode.kind == TaskKind::retrieval) {
    store_ = std::make_shared<ExampleStore>(ExampleStore::aliasing_labels(dim));
  } else {
    if (label_dim == 0) throw Error("BoundaryForest: label dimension must be positive");
    store_ = std::make_shared<ExampleStore>(dim, label_dim);
  }

  TreeParams params;
  params.max_children = config_.max_children;
  params.epsilon = config_.mode.kind == TaskKind::regression ? config_.mode.epsilon : 0.0;
  params.label_metric = label_metric_for(config_.mode.kind);
  params.metric = config_.metric;
  trees_.reserve(config_.n_trees);
  for (std::size_t i = 0; i < config_.n_trees; ++i) {
    trees_.emplace_back(store_, params, tree_seed(config_.seed, i));
  }
  pool_ = std::make_unique<WorkerPool>(std::min(std::max<std::size_t>(config_.threads, 1), config_.n_trees));
}

BoundaryForest::BoundaryForest(BoundaryForest&&) noexcept = default;
BoundaryForest& BoundaryForest::operator=(BoundaryForest&&) noexcept = default;
BoundaryForest::~BoundaryForest() = default;

void BoundaryForest::validate_point(std::span<const double> y, std::span<const double> label) const {
  if (y.size() != store_->dim()) {
    throw Error("BoundaryForest: position has " + std::to_string(y.size()) + " coordinates, expected " +
                std::to_string(store_->dim()));
  }
  require_finite(y, "BoundaryForest: position");
  if (config_.mode.kind == TaskKind::retrieval) return;
  if (label.size() != store_->label_dim()) {
    throw Error("BoundaryForest: label has " + std::to_string(label.size()) + " entries, expected " +
                std::to_string(store_->label_dim()));
  }
  require_finite(label, "BoundaryForest: label");
  if (config_.mode.kind == TaskKind::classification) {
    std::size_t ones = 0;
    for (double v : label) {
      if (v == 1.0) {
        ++ones;
      } else if (v != 0.0) {
        throw Error("BoundaryForest: classification label must be a 0/1 indicator");
      }
    }
    if (ones != 1) throw Error("BoundaryForest: classification label must have exactly one 1");
  }
}

ExampleId BoundaryForest::store_point(std::span<const double> y, std::span<const double> label) {
  return config_.mode.kind == TaskKind::retrieval ? store_->append(y) : store_->append(y, label);
}

TrainOutcome BoundaryForest::train(std::span<const double> y, std::span<const double> label) {
  validate_point(y, label);
  TrainOutcome outcome;
  if (!initialized_) {
    outcome.buffered = true;
    outcome.stored = store_point(y, label);
    if (store_->size() == trees_.size()) run_initialization();
    return outcome;
  }

  const std::size_t n = trees_.size();
  std::vector<BoundaryTree::TrainDecision> decisions(n);
  std::vector<QueryStats> stats(n);
  pool_->parallel_for(n, [&](std::size_t i) { decisions[i] = trees_[i].evaluate(y, label, &stats[i]); });

  outcome.added.resize(n);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    outcome.added[i] = decisions[i].add;
    any = any || decisions[i].add;
    training_stats_ += stats[i];
  }
  if (any) {
    const ExampleId id = store_point(y, label);
    outcome.stored = id;
    for (std::size_t i = 0; i < n; ++i) {
      if (decisions[i].add) trees_[i].link(decisions[i].nearest.node, id);
    }
  }
  return outcome;
}

void BoundaryForest::initialize(std::span<const DataPoint> first_points) {
  if (initialized_) throw Error("BoundaryForest: already initialized");
  if (!store_->empty()) throw Error("BoundaryForest: initialize called after points were buffered");
  if (first_points.size() != trees_.size()) {
    throw Error("BoundaryForest: initialize needs exactly n_T = " + std::to_string(trees_.size()) + " points");
  }
  for (const auto& p : first_points) validate_point(p.position, p.label);
  for (const auto& p : first_points) store_point(p.position, p.label);
  run_initialization();
}

void BoundaryForest::run_initialization() {
  const std::size_t n = trees_.size();
  std::vector<QueryStats> stats(n);
  pool_->parallel_for(n, [&](std::size_t i) {
    BoundaryTree& tree = trees_[i];
    tree.set_root(static_cast<ExampleId>(i));
    std::vector<std::uint32_t> order;
    order.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order.push_back(static_cast<std::uint32_t>(j));
    }
    Rng rng(shuffle_seed(config_.seed, i));
    shuffle(std::span(order), rng);
    for (std::uint32_t j : order) tree.train(static_cast<ExampleId>(j), &stats[i]);
  });
  for (const auto& s : stats) training_stats_ += s;
  initialized_ = true;
}

Prediction BoundaryForest::query(std::span<const double> y, QueryStats* stats) const {
  if (y.size() != store_->dim()) {
    throw Error("BoundaryForest: query has " + std::to_string(y.size()) + " coordinates, expected " +
                std::to_string(store_->dim()));
  }
  require_finite(y, "BoundaryForest: query");
  if (!initialized_) {
    if (store_->empty()) throw Error("BoundaryForest: query before any training");
    return query_buffer(y, stats);
  }

  const std::size_t n = trees_.size();
  std::vector<TreeHit> hits(n);
  std::vector<QueryStats> per_tree(n);
  pool_->parallel_for(n, [&](std::size_t i) {
    const auto r = trees_[i].query(y, &per_tree[i]);
    hits[i] = TreeHit{r.node, r.example, r.distance};
  });
  if (stats) {
    for (const auto& s : per_tree) *stats += s;
  }
  return combine(y, std::move(hits));
}

Prediction BoundaryForest::combine(std::span<const double>, std::vector<TreeHit> hits) const {
  Prediction prediction;
  if (config_.mode.kind == TaskKind::retrieval) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < hits.size(); ++i) {
      if (hits[i].distance < hits[best].distance) best = i;
    }
    const auto label = store_->label(hits[best].example);
    prediction.label.assign(label.begin(), label.end());
    prediction.example = hits[best].example;
    prediction.distance = hits[best].distance;
  } else {
    std::vector<WeightedLabel> weighted;
    weighted.reserve(hits.size());
    for (const auto& h : hits) weighted.push_back({store_->label(h.example), h.distance});
    prediction.label = shepard_estimate(weighted);
  }
  prediction.per_tree = std::move(hits);
  return prediction;
}

Prediction BoundaryForest::query_buffer(std::span<const double> y, QueryStats* stats) const {
  const std::size_t count = store_->size();
  std::vector<double> distances(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto id = static_cast<ExampleId>(i);
    distances[i] = config_.metric.key_to_distance(config_.metric.key(y, store_->position(id)));
  }
  if (stats) stats->metric_comparisons += count;

  Prediction prediction;
  if (config_.mode.kind == TaskKind::retrieval) {
    const auto best = static_cast<std::size_t>(std::min_element(distances.begin(), distances.end()) - distances.begin());
    const auto id = static_cast<ExampleId>(best);
    const auto label = store_->label(id);
    prediction.label.assign(label.begin(), label.end());
    prediction.example = id;
    prediction.distance = distances[best];
    return prediction;
  }
  std::vector<WeightedLabel> weighted;
  weighted.reserve(count);
  for (std::size_t i = 0; i < count; ++i) weighted.push_back({store_->label(static_cast<ExampleId>(i)), distances[i]});
  prediction.label = shepard_estimate(weighted);
  return prediction;
}

std::size_t BoundaryForest::classify(std::span<const double> y, QueryStats* stats) const {
  if (config_.mode.kind != TaskKind::classification) throw Error("classify requires classification mode");
  return argmax(query(y, stats).label);
}

BoundaryForest BoundaryForest::offline(ForestConfig config, std::size_t dim, std::size_t label_dim,
                                       std::span<const DataPoint> data) {
  BoundaryForest forest(std::move(config), dim, label_dim);
  if (data.empty()) throw Error("BoundaryForest::offline: empty training set");
  for (const auto& p : data) forest.validate_point(p.position, p.label);
  forest.store_->reserve(data.size());
  for (const auto& p : data) forest.store_point(p.position, p.label);

  const std::size_t n = forest.trees_.size();
  std::vector<QueryStats> stats(n);
  forest.pool_->parallel_for(n, [&](std::size_t i) {
    std::vector<std::uint32_t> order(data.size());
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(shuffle_seed(forest.config_.seed, i));
    shuffle(std::span(order), rng);
    BoundaryTree& tree = forest.trees_[i];
    tree.set_root(static_cast<ExampleId>(order.front()));
    for (std::size_t j = 1; j < order.size(); ++j) tree.train(static_cast<ExampleId>(order[j]), &stats[i]);
  });
  for (const auto& s : stats) forest.training_stats_ += s;
  forest.initialized_ = true;
  return forest;
}

}  // namespace bf
