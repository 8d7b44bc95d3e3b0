#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bf/boundary_forest.hpp"
#include "bf/store.hpp"

namespace bf {

struct Neighbor {
  ExampleId id;
  double distance;
};

/// Exact K nearest stored examples under Euclidean distance, ascending by
/// distance, lower id first on ties. Throws if K exceeds the store size.
std::vector<Neighbor> brute_knn(const ExampleStore& store, std::span<const double> y, std::size_t K);

struct RankResult {
  std::size_t query = 0;
  ExampleId returned{};
  /// 1 + number of stored examples strictly closer to the query than the
  /// returned one; equidistant examples do not count against it.
  std::size_t rank = 0;
  double fraction = 0.0;
};

/// Rank of `returned` among all stored examples ordered by distance to y.
RankResult rank_of(const ExampleStore& store, std::span<const double> y, ExampleId returned);

/// Nearest-rank quantile: the smallest value v such that at least p of the
/// samples are <= v. p in (0, 1].
double quantile(std::vector<double> values, double p);

struct RetrievalFraction {
  /// The `percentile` quantile of rank / N across queries.
  double f = 0.0;
  std::vector<RankResult> ranks;
};

using Retriever = std::function<ExampleId(std::span<const double>)>;

/// Runs `retrieve` on every query (row-major, store.dim() wide) and measures
/// where the answers fall in the exact ordering of the store.
RetrievalFraction retrieval_fraction(const ExampleStore& store, std::span<const double> queries,
                                     const Retriever& retrieve, double percentile = 0.99);

/// Same, with the forest's retrieval answer. The forest must be in retrieval mode.
RetrievalFraction retrieval_fraction(const BoundaryForest& forest, std::span<const double> queries,
                                     double percentile = 0.99);

/// Labelled evaluation set: row-major positions plus 0-based classes.
struct ClassifiedSet {
  std::size_t dim = 0;
  std::vector<double> positions;
  std::vector<std::size_t> classes;
  std::size_t n_classes = 0;

  std::size_t size() const noexcept { return classes.size(); }
  std::span<const double> position(std::size_t i) const {
    return std::span<const double>(positions).subspan(i * dim, dim);
  }
  LabelVector indicator(std::size_t i) const;
};

struct ErrorRate {
  double percent = 0.0;
  std::size_t errors = 0;
  std::size_t total = 0;
  QueryStats stats;
};

/// Percentage of test points whose predicted class differs from the truth.
ErrorRate error_rate(const BoundaryForest& forest, const ClassifiedSet& test);

/// One online pass over `train` in the given order.
BoundaryForest train_online(const ForestConfig& config, const ClassifiedSet& train);

/// Error of the offline forest, where every tree sees its own full reshuffle.
double offline_bf_error(const ClassifiedSet& train, const ClassifiedSet& test, ForestConfig config);

}  // namespace bf
