#include <doctest.h>

#include <memory>
#include <set>
#include <vector>

#include "bf/boundary_tree.hpp"
#include "bf/rng.hpp"
#include "../support/oracles.hpp"

using V = std::vector<double>;

namespace {

struct Fixture {
  std::shared_ptr<bf::ExampleStore> store;
  bf::BoundaryTree tree;

  Fixture(std::size_t dim, std::size_t k, bf::LabelMetricKind label_metric = bf::LabelMetricKind::always_far,
          std::uint64_t seed = 1, std::size_t label_dim = 0)
      : store(label_metric == bf::LabelMetricKind::always_far
                  ? std::make_shared<bf::ExampleStore>(bf::ExampleStore::aliasing_labels(dim))
                  : std::make_shared<bf::ExampleStore>(dim, label_dim)),
        tree(store, params(k, label_metric), seed) {}

  static bf::TreeParams params(std::size_t k, bf::LabelMetricKind label_metric) {
    bf::TreeParams p;
    p.max_children = k;
    p.label_metric = label_metric;
    return p;
  }

  bf::ExampleId add(const V& p) { return store->append(p); }
};


V random_point(bf::Rng& rng, std::size_t d, double scale = 1.0) {
  V p(d);
  for (double& x : p) x = scale * rng.uniform();
  return p;
}

}  // namespace

TEST_CASE("single root answers every query") {
  Fixture f(2, 2);
  f.tree.set_root(f.add(V{0.3, 0.3}));
  bf::QueryStats stats;
  const auto r = f.tree.query(V{9, -4}, &stats);
  CHECK(bf::to_index(r.node) == 0);
  CHECK(stats.metric_comparisons == 1);
  CHECK(stats.path_length == 1);
}

TEST_CASE("strictly closer child is returned") {
  Fixture f(2, 2);
  const auto root = f.tree.set_root(f.add(V{0, 0}));
  const auto child = f.tree.link(root, f.add(V{1, 0}));
  const auto r = f.tree.query(V{2, 0});
  CHECK(r.node == child);
  CHECK(r.distance == 1.0);
}

TEST_CASE("full root is not a candidate") {
  Fixture f(2, 2);
  const auto root = f.tree.set_root(f.add(V{0, 0}));
  f.tree.link(root, f.add(V{1, 0}));
  const auto near = f.tree.link(root, f.add(V{0.4, 0}));
  const V y{0.05, 0};
  bf::QueryStats stats;
  const auto r = f.tree.query(y, &stats);
  CHECK(r.node == near);
  CHECK(bf::to_index(r.node) == oracle::greedy_walk(f.tree, y));
  CHECK(r.distance == doctest::Approx(0.35));
  // root full: 2 children; then [0.4,0] with no children: 1
  CHECK(stats.metric_comparisons == 3);
}

TEST_CASE("classification add rule") {
  Fixture f(1, 5, bf::LabelMetricKind::discrete, 1, 2);
  const auto root_id = f.store->append(V{0}, V{1, 0});
  f.tree.set_root(root_id);
  auto r = f.tree.train(V{1}, V{1, 0});
  CHECK(!r.added);
  CHECK(f.tree.size() == 1);
  CHECK(f.store->size() == 1);
  r = f.tree.train(V{1}, V{0, 1});
  CHECK(r.added);
  REQUIRE(r.new_node.has_value());
  CHECK(bf::to_index(f.tree.node(static_cast<bf::NodeIndex>(0)).children.at(0)) == bf::to_index(*r.new_node));
  CHECK(f.store->size() == 2);
}

TEST_CASE("regression add rule uses epsilon") {
  bf::TreeParams p;
  p.max_children = 3;
  p.epsilon = 0.5;
  p.label_metric = bf::LabelMetricKind::absolute_difference;
  auto store = std::make_shared<bf::ExampleStore>(1, 1);
  bf::BoundaryTree tree(store, p, 0);
  tree.set_root(store->append(V{0}, V{2.0}));
  CHECK(!tree.train(V{1}, V{2.4}).added);
  CHECK(!tree.train(V{1}, V{2.5}).added);
  CHECK(tree.train(V{1}, V{2.6}).added);
}

TEST_CASE("retrieval adds everything") {
  Fixture f(3, 50);
  bf::Rng rng(2);
  f.tree.set_root(f.add(random_point(rng, 3)));
  for (int i = 0; i < 100; ++i) CHECK(f.tree.train(random_point(rng, 3), {}).added);
  CHECK(f.tree.size() == 101);
  CHECK(f.store->size() == 101);
}

TEST_CASE("shape histograms") {
  Fixture f(1, 5);
  const auto root = f.tree.set_root(f.add(V{0}));
  auto s = f.tree.shape();
  CHECK(s.depth == std::map<std::size_t, std::size_t>{{0, 1}});
  CHECK(s.fanout == std::map<std::size_t, std::size_t>{{0, 1}});
  for (int i = 1; i <= 3; ++i) f.tree.link(root, f.add(V{static_cast<double>(i)}));
  s = f.tree.shape();
  CHECK(s.depth == std::map<std::size_t, std::size_t>{{0, 1}, {1, 3}});
  CHECK(s.fanout == std::map<std::size_t, std::size_t>{{0, 3}, {3, 1}});
  CHECK(s.root_fanout == 3);
  CHECK(s.max_depth == 1);
}

TEST_CASE("errors") {
  Fixture f(2, 2);
  CHECK_THROWS_AS(f.tree.query(V{0, 0}), bf::Error);
  const auto root = f.tree.set_root(f.add(V{0, 0}));
  CHECK_THROWS_AS(f.tree.query(V{0}), bf::Error);
  CHECK_THROWS_AS(f.tree.set_root(f.add(V{1, 1})), bf::Error);
  f.tree.link(root, f.add(V{2, 2}));
  f.tree.link(root, f.add(V{3, 3}));
  CHECK_THROWS_AS(f.tree.link(root, f.add(V{4, 4})), bf::Error);
  auto store = std::make_shared<bf::ExampleStore>(1, 1);
  bf::TreeParams p;
  p.max_children = 1;
  CHECK_THROWS_AS(bf::BoundaryTree(store, p, 0), bf::Error);
}

TEST_CASE("traversal matches the independent walker") {
  bf::Rng rng(21);
  for (std::size_t k : std::vector<std::size_t>{2, 3, 5, 50, bf::kUnboundedChildren}) {
    for (int trial = 0; trial < 5; ++trial) {
      Fixture f(3, k, bf::LabelMetricKind::always_far, rng.next());
      f.tree.set_root(f.add(random_point(rng, 3)));
      for (int i = 0; i < 300; ++i) f.tree.train(random_point(rng, 3), {});
      for (int q = 0; q < 100; ++q) {
        const V y = random_point(rng, 3);
        bf::QueryStats stats;
        std::size_t expect_comparisons = 0;
        const auto r = f.tree.query(y, &stats);
        CHECK(bf::to_index(r.node) == oracle::greedy_walk(f.tree, y, &expect_comparisons));
        CHECK(stats.metric_comparisons == expect_comparisons);
      }
    }
  }
}

TEST_CASE("descent from a non-full node never moves away from the query") {
  bf::Rng rng(22);
  Fixture f(2, 4);
  f.tree.set_root(f.add(random_point(rng, 2)));
  for (int i = 0; i < 500; ++i) f.tree.train(random_point(rng, 2), {});
  const auto& nodes = f.tree.nodes();
  for (int q = 0; q < 200; ++q) {
    const V y = random_point(rng, 2);
    // Retrace with the oracle's rule and check each step.
    std::size_t v = 0;
    for (;;) {
      const double dv = oracle::euclid(f.store->position(nodes[v].example), y);
      std::size_t best = v;
      double best_d = nodes[v].children.size() < 4 ? dv : 1e300;
      for (auto c : nodes[v].children) {
        const double d = oracle::euclid(f.store->position(nodes[bf::to_index(c)].example), y);
        if (d < best_d) {
          best_d = d;
          best = bf::to_index(c);
        }
      }
      if (best == v) break;
      if (nodes[v].children.size() < 4) CHECK(best_d < dv);
      v = best;
    }
    CHECK(bf::to_index(f.tree.query(y).node) == v);
  }
}

TEST_CASE("child cap holds for small k") {
  bf::Rng rng(23);
  for (std::size_t k : {2u, 3u, 7u}) {
    Fixture f(2, k);
    f.tree.set_root(f.add(random_point(rng, 2)));
    for (int i = 0; i < 2000; ++i) f.tree.train(random_point(rng, 2), {});
    for (const auto& n : f.tree.nodes()) CHECK(n.children.size() <= k);
    // Children are created after their parent.
    for (std::size_t i = 0; i < f.tree.size(); ++i) {
      for (auto c : f.tree.nodes()[i].children) CHECK(bf::to_index(c) > i);
    }
  }
}

TEST_CASE("one-shot at tree level") {
  bf::Rng rng(24);
  Fixture f(2, 3, bf::LabelMetricKind::discrete, 5, 3);
  f.tree.set_root(f.store->append(random_point(rng, 2), V{1, 0, 0}));
  for (int i = 0; i < 1000; ++i) {
    const V y = random_point(rng, 2);
    V label(3, 0.0);
    label[rng.below(3)] = 1.0;
    f.tree.train(y, label);
    const auto r = f.tree.query(y);
    CHECK(bf::argmax(f.store->label(r.example)) == bf::argmax(label));
  }
}

TEST_CASE("ties are broken randomly but reproducibly") {
  std::set<std::size_t> picked;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    Fixture f(1, 2, bf::LabelMetricKind::always_far, seed);
    const auto root = f.tree.set_root(f.add(V{0}));
    f.tree.link(root, f.add(V{1}));
    f.tree.link(root, f.add(V{-1}));
    const auto first = f.tree.query(V{0}).node;
    for (int i = 0; i < 5; ++i) CHECK(f.tree.query(V{0}).node == first);
    picked.insert(bf::to_index(first));
  }
  CHECK(picked == std::set<std::size_t>{1, 2});
}

TEST_CASE("equal seeds and inputs give identical structure") {
  // Grid points produce many distance ties, so the tie stream matters.
  auto build = [](std::uint64_t seed) {
    Fixture f(2, 3, bf::LabelMetricKind::always_far, seed);
    bf::Rng rng(99);
    f.tree.set_root(f.add(V{0, 0}));
    for (int i = 0; i < 400; ++i) {
      f.tree.train(V{static_cast<double>(rng.below(6)), static_cast<double>(rng.below(6))}, {});
    }
    return f;
  };
  const auto a = build(7), b = build(7), c = build(8);
  CHECK(bf::same_structure(a.tree, b.tree));
  CHECK(!bf::same_structure(a.tree, c.tree));
}

TEST_CASE("uniform rescaling leaves the structure unchanged") {
  for (double lambda : {1024.0, 1000.0, 1e-3}) {
    CAPTURE(lambda);
    auto build = [&](double scale) {
      Fixture f(4, 3, bf::LabelMetricKind::discrete, 3, 2);
      bf::Rng rng(31);
      f.tree.set_root(f.store->append(random_point(rng, 4, scale), V{1, 0}));
      for (int i = 0; i < 1500; ++i) {
        V label{0, 0};
        label[rng.below(2)] = 1;
        f.tree.train(random_point(rng, 4, scale), label);
      }
      return f;
    };
    const auto base = build(1.0), scaled = build(lambda);
    CHECK(bf::same_structure(base.tree, scaled.tree));
  }
}
