#include "bf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bf/simd/kernels.hpp"

namespace bf {

namespace {

void check_query_dim(const ExampleStore& store, std::span<const double> y) {
  if (y.size() != store.dim()) {
    throw Error("query has " + std::to_string(y.size()) + " coordinates, expected " + std::to_string(store.dim()));
  }
  require_finite(y, "query");
}

std::vector<double> squared_distances(const ExampleStore& store, std::span<const double> y) {
  std::vector<double> out(store.size());
  simd::squared_l2_rows(y.data(), store.positions().data(), store.size(), store.dim(), out.data());
  return out;
}

}  // namespace

std::vector<Neighbor> brute_knn(const ExampleStore& store, std::span<const double> y, std::size_t K) {
  if (store.empty()) throw Error("brute_knn: empty store");
  if (K > store.size()) {
    throw Error("brute_knn: K = " + std::to_string(K) + " exceeds store size " + std::to_string(store.size()));
  }
  check_query_dim(store, y);
  const auto sq = squared_distances(store, y);
  std::vector<std::uint32_t> ids(sq.size());
  std::iota(ids.begin(), ids.end(), 0u);
  auto closer = [&](std::uint32_t a, std::uint32_t b) { return sq[a] < sq[b] || (sq[a] == sq[b] && a < b); };
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(K), ids.end(), closer);

  std::vector<Neighbor> result;
  result.reserve(K);
  for (std::size_t i = 0; i < K; ++i) result.push_back({static_cast<ExampleId>(ids[i]), std::sqrt(sq[ids[i]])});
  return result;
}

RankResult rank_of(const ExampleStore& store, std::span<const double> y, ExampleId returned) {
  check_query_dim(store, y);
  if (to_index(returned) >= store.size()) throw Error("rank_of: returned id not in store");
  const auto sq = squared_distances(store, y);
  const double target = sq[to_index(returned)];
  const auto closer = static_cast<std::size_t>(std::count_if(sq.begin(), sq.end(), [&](double d) { return d < target; }));
  RankResult r;
  r.returned = returned;
  r.rank = closer + 1;
  r.fraction = static_cast<double>(r.rank) / static_cast<double>(store.size());
  return r;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw Error("quantile of an empty sample");
  if (!(p > 0.0 && p <= 1.0)) throw Error("quantile: p must lie in (0, 1]");
  const auto n = values.size();
  auto index = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  index = std::clamp<std::size_t>(index, 1, n) - 1;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(index), values.end());
  return values[index];
}

RetrievalFraction retrieval_fraction(const ExampleStore& store, std::span<const double> queries,
                                     const Retriever& retrieve, double percentile) {
  if (store.empty()) throw Error("retrieval_fraction: empty store");
  if (queries.empty() || queries.size() % store.dim() != 0) {
    throw Error("retrieval_fraction: query set is empty or not a multiple of the dimension");
  }
  const std::size_t n_queries = queries.size() / store.dim();
  RetrievalFraction out;
  out.ranks.reserve(n_queries);
  std::vector<double> fractions;
  fractions.reserve(n_queries);
  for (std::size_t q = 0; q < n_queries; ++q) {
    const auto y = queries.subspan(q * store.dim(), store.dim());
    RankResult r = rank_of(store, y, retrieve(y));
    r.query = q;
    fractions.push_back(r.fraction);
    out.ranks.push_back(r);
  }
  out.f = quantile(std::move(fractions), percentile);
  return out;
}

RetrievalFraction retrieval_fraction(const BoundaryForest& forest, std::span<const double> queries,
                                     double percentile) {
  if (forest.config().mode.kind != TaskKind::retrieval) throw Error("retrieval_fraction: forest is not in retrieval mode");
  return retrieval_fraction(
      forest.store(), queries, [&](std::span<const double> y) { return *forest.query(y).example; }, percentile);
}

LabelVector ClassifiedSet::indicator(std::size_t i) const {
  LabelVector label(n_classes, 0.0);
  label.at(classes.at(i)) = 1.0;
  return label;
}

ErrorRate error_rate(const BoundaryForest& forest, const ClassifiedSet& test) {
  if (test.size() == 0) throw Error("error_rate: empty test set");
  ErrorRate out;
  out.total = test.size();
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (forest.classify(test.position(i), &out.stats) != test.classes[i]) ++out.errors;
  }
  out.percent = 100.0 * static_cast<double>(out.errors) / static_cast<double>(out.total);
  return out;
}

BoundaryForest train_online(const ForestConfig& config, const ClassifiedSet& train) {
  if (train.size() < config.n_trees) {
    throw Error("training set has " + std::to_string(train.size()) + " rows, fewer than n_T = " +
                std::to_string(config.n_trees));
  }
  BoundaryForest forest(config, train.dim, train.n_classes);
  LabelVector label(train.n_classes, 0.0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    std::fill(label.begin(), label.end(), 0.0);
    label[train.classes[i]] = 1.0;
    forest.train(train.position(i), label);
  }
  return forest;
}

double offline_bf_error(const ClassifiedSet& train, const ClassifiedSet& test, ForestConfig config) {
  config.mode = TaskMode::classification();
  std::vector<DataPoint> data;
  data.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto p = train.position(i);
    data.push_back({Position(p.begin(), p.end()), train.indicator(i)});
  }
  const auto forest = BoundaryForest::offline(config, train.dim, train.n_classes, data);
  return error_rate(forest, test).percent;
}

}  // namespace bf
