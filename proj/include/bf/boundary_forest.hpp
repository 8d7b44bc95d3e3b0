#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "bf/boundary_tree.hpp"
#include "bf/parallel.hpp"
#include "bf/stats.hpp"
#include "bf/store.hpp"

namespace bf {

enum class TaskKind { classification, regression, retrieval };

struct TaskMode {
  TaskKind kind = TaskKind::classification;
  /// Regression add threshold on max |label difference|. Ignored otherwise.
  double epsilon = 0.0;

  static TaskMode classification() { return {TaskKind::classification, 0.0}; }
  static TaskMode regression(double epsilon) { return {TaskKind::regression, epsilon}; }
  static TaskMode retrieval() { return {TaskKind::retrieval, 0.0}; }
};

const char* task_name(TaskKind kind) noexcept;

struct ForestConfig {
  TaskMode mode;
  std::size_t n_trees = 50;
  std::size_t max_children = 50;
  std::uint64_t seed = 0;
  /// Workers used to fan out over trees. Results do not depend on this.
  std::size_t threads = 1;
  PositionMetric metric = PositionMetric::euclidean();
};

/// A label paired with its distance to the query.
struct WeightedLabel {
  std::span<const double> label;
  double distance;
};

/// Inverse-distance weighted mean of the labels. If any distance is zero the
/// result is the plain mean of the zero-distance labels.
LabelVector shepard_estimate(std::span<const WeightedLabel> results);

struct TreeHit {
  NodeIndex node;
  ExampleId example;
  double distance;
};

struct Prediction {
  /// Shepard estimate (classification, regression) or the retrieved example's label.
  LabelVector label;
  /// Retrieval: the returned example.
  std::optional<ExampleId> example;
  /// Distance from the query to `example` (retrieval only).
  double distance = 0.0;
  /// One entry per tree, in tree order. Empty when answered from the init buffer.
  std::vector<TreeHit> per_tree;
};

struct TrainOutcome {
  /// Per-tree add flags; empty while the point only went into the init buffer.
  std::vector<bool> added;
  /// True while the forest is still collecting its first n_T points.
  bool buffered = false;
  /// Store id of the example, if it was stored.
  std::optional<ExampleId> stored;
};

/// n_T boundary trees over one shared store.
///
/// The first n_T training points are buffered; when the n_T-th arrives, tree i
/// is rooted at point i and trained on the other n_T - 1 points in its own
/// random order. After that, every training point is offered to every tree and
/// appended to the store at most once, however many trees take it.
class BoundaryForest {
 public:
  /// label_dim: number of classes (classification) or target length
  /// (regression). Retrieval labels alias positions and label_dim is ignored.
  BoundaryForest(ForestConfig config, std::size_t dim, std::size_t label_dim);

  BoundaryForest(BoundaryForest&&) noexcept;
  BoundaryForest& operator=(BoundaryForest&&) noexcept;
  ~BoundaryForest();

  TrainOutcome train(std::span<const double> y, std::span<const double> label);
  /// Retrieval training; the label is the position itself.
  TrainOutcome train(std::span<const double> y) { return train(y, y); }

  /// Explicit initialization with exactly n_T points. Throws if the forest has
  /// already been initialized or has buffered points.
  void initialize(std::span<const DataPoint> first_points);

  /// Throws if neither initialized nor holding buffered points. Before
  /// initialization the answer is computed by brute force over the buffer.
  Prediction query(std::span<const double> y, QueryStats* stats = nullptr) const;

  /// argmax of the classification estimate; lowest index wins ties.
  std::size_t classify(std::span<const double> y, QueryStats* stats = nullptr) const;

  /// Offline variant: every tree gets its own full reshuffle of `data` and is
  /// rooted at the first element of that shuffle.
  static BoundaryForest offline(ForestConfig config, std::size_t dim, std::size_t label_dim,
                                std::span<const DataPoint> data);

  bool initialized() const noexcept { return initialized_; }
  std::size_t buffered_count() const noexcept { return initialized_ ? 0 : store_->size(); }
  std::size_t n_trees() const noexcept { return trees_.size(); }
  const BoundaryTree& tree(std::size_t i) const { return trees_.at(i); }
  const ExampleStore& store() const noexcept { return *store_; }
  const ForestConfig& config() const noexcept { return config_; }
  /// Cumulative cost of all training-time queries.
  const QueryStats& training_stats() const noexcept { return training_stats_; }

 private:
  void validate_point(std::span<const double> y, std::span<const double> label) const;
  ExampleId store_point(std::span<const double> y, std::span<const double> label);
  void run_initialization();
  Prediction query_buffer(std::span<const double> y, QueryStats* stats) const;
  Prediction combine(std::span<const double> y, std::vector<TreeHit> hits) const;

  ForestConfig config_;
  std::shared_ptr<ExampleStore> store_;
  std::vector<BoundaryTree> trees_;
  std::unique_ptr<WorkerPool> pool_;
  bool initialized_ = false;
  QueryStats training_stats_;
};

}  // namespace bf
