#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "bf/artificial_tree.hpp"
#include "bf/fit.hpp"
#include "bf/rng.hpp"
#include "bf/scaling.hpp"
#include "bf/synthetic.hpp"

using V = std::vector<double>;

namespace {

// Exact expected probe cost of the artificial tree after n insertions, by
// enumerating every reachable tree with its probability.
struct ExactArtificial {
  using Tree = std::vector<std::vector<int>>;  // children lists, node 0 = root
  std::size_t k;

  void grow(const Tree& t, int node, double p, std::map<Tree, double>& out) const {
    const auto q = t[node].size();
    const bool can_stop = q < k;
    if (can_stop) {
      Tree next = t;
      next[node].push_back(static_cast<int>(next.size()));
      next.emplace_back();
      out[next] += p / static_cast<double>(q + 1);
    }
    if (q == 0) return;
    const double move = can_stop ? static_cast<double>(q) / static_cast<double>(q + 1) : 1.0;
    for (int c : t[node]) grow(t, c, p * move / static_cast<double>(q), out);
  }

  double probe(const Tree& t, int node) const {
    const auto q = t[node].size();
    const bool can_stop = q < k;
    double cost = static_cast<double>(q) + (can_stop ? 1.0 : 0.0);
    if (q == 0) return cost;
    const double move = can_stop ? static_cast<double>(q) / static_cast<double>(q + 1) : 1.0;
    double sub = 0.0;
    for (int c : t[node]) sub += probe(t, c);
    return cost + move * sub / static_cast<double>(q);
  }

  // Expected probe cost after each of 1..n insertions.
  std::vector<double> curve(std::size_t n) const {
    std::map<Tree, double> states{{Tree{{}}, 1.0}};
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) {
      std::map<Tree, double> next;
      for (const auto& [t, p] : states) grow(t, 0, p, next);
      states = std::move(next);
      double e = 0.0;
      for (const auto& [t, p] : states) e += p * probe(t, 0);
      out.push_back(e);
    }
    return out;
  }
};

bf::ScalingCurve make_curve(const std::function<double(double)>& f, std::size_t points = 20) {
  bf::ScalingCurve c;
  for (std::size_t i = 0; i < points; ++i) {
    const double n = std::pow(10.0, 1.0 + 0.25 * static_cast<double>(i));
    c.points.push_back({n, f(n)});
  }
  return c;
}

}  // namespace

TEST_CASE("hypercube samples lie in the unit cube and repeat with the seed") {
  const auto src = bf::SyntheticSource::hypercube(2, 5);
  const auto a = bf::generate(src, 3);
  REQUIRE(a.size() == 6);
  for (double x : a) CHECK((x >= 0.0 && x < 1.0));
  CHECK(bf::generate(src, 3) == a);
  CHECK(bf::generate(src.reseeded(6), 3) != a);
}

TEST_CASE("zero-variance mixture component returns its mean") {
  bf::GaussianComponent c{{0.25, -3.0, 7.0}, V(9, 0.0), 1.0};
  const auto pts = bf::generate(bf::SyntheticSource::mixture({c}, 1), 50);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(pts[i] == c.mean[i % 3]);
}

TEST_CASE("hypercube coordinate means approach one half") {
  bf::SyntheticStream stream(bf::SyntheticSource::hypercube(100, 9));
  V sum(100, 0.0), x(100);
  const std::size_t n = 1'000'000;
  for (std::size_t i = 0; i < n; ++i) {
    stream.next(x);
    for (std::size_t j = 0; j < 100; ++j) sum[j] += x[j];
  }
  for (double s : sum) CHECK(std::abs(s / static_cast<double>(n) - 0.5) < 0.01);
}

TEST_CASE("mixture sampling follows weights and covariance") {
  // Diagonal covariance diag(4, 0.25) at mean (1, -1) with weight 0.75, and a
  // point mass at (10, 10) with weight 0.25.
  bf::GaussianComponent a{{1.0, -1.0}, {4.0, 0.0, 0.0, 0.25}, 0.75};
  bf::GaussianComponent b{{10.0, 10.0}, V(4, 0.0), 0.25};
  bf::SyntheticStream stream(bf::SyntheticSource::mixture({a, b}, 3));
  std::size_t from_a = 0;
  double sx = 0, sy = 0, sxx = 0, syy = 0;
  V x(2);
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    if (stream.next(x) == 0) {
      ++from_a;
      sx += x[0];
      sy += x[1];
      sxx += x[0] * x[0];
      syy += x[1] * x[1];
    } else {
      CHECK(x == V{10.0, 10.0});
    }
  }
  const double m = static_cast<double>(from_a);
  CHECK(m / n == doctest::Approx(0.75).epsilon(0.01));
  CHECK(sx / m == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sy / m == doctest::Approx(-1.0).epsilon(0.02));
  CHECK(sxx / m - std::pow(sx / m, 2) == doctest::Approx(4.0).epsilon(0.02));
  CHECK(syy / m - std::pow(sy / m, 2) == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("invalid mixtures are rejected") {
  bf::GaussianComponent good{{0.0}, {1.0}, 0.5};
  CHECK_THROWS_AS(bf::SyntheticStream(bf::SyntheticSource::mixture({good}, 0)), bf::Error);
  bf::GaussianComponent negative{{0.0}, {-1.0}, 1.0};
  CHECK_THROWS_AS(bf::SyntheticStream(bf::SyntheticSource::mixture({negative}, 0)), bf::Error);
  bf::GaussianComponent asym{{0.0, 0.0}, {1.0, 0.5, 0.0, 1.0}, 1.0};
  CHECK_THROWS_AS(bf::SyntheticStream(bf::SyntheticSource::mixture({asym}, 0)), bf::Error);
  CHECK_THROWS_AS(bf::SyntheticStream(bf::SyntheticSource::mixture({}, 0)), bf::Error);
}

TEST_CASE("psd cholesky reproduces the matrix") {
  const V cov{4, 2, 0, 2, 2, 0, 0, 0, 0};
  const auto l = bf::psd_cholesky(cov, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int t = 0; t < 3; ++t) s += l[i * 3 + t] * l[j * 3 + t];
      CHECK(s == doctest::Approx(cov[i * 3 + j]).epsilon(1e-12));
    }
  }
  const auto mix = bf::random_mixture(5, 4, 1);
  CHECK(mix.dim() == 5);
  CHECK_NOTHROW(bf::generate(mix, 10));
}

TEST_CASE("artificial tree: first insertion and node count") {
  bf::ArtificialTreeOptions o;
  o.insertions = 1;
  const auto one = bf::artificial_tree_sim(o);
  CHECK(one.node_count == 2);
  CHECK(one.first_insertion_comparisons == 1);
  CHECK(one.root_fanout == 1);
  for (std::size_t k : std::vector<std::size_t>{2, 3, 10, bf::kUnboundedChildren}) {
    o.insertions = 5000;
    o.max_children = k;
    o.seed = k;
    const auto r = bf::artificial_tree_sim(o);
    CHECK(r.node_count == 5001);
    std::size_t nodes = 0;
    for (const auto& [q, count] : r.fanout) {
      nodes += count;
      CHECK(q <= k);
    }
    CHECK(nodes == 5001);
    CHECK(r.max_fanout <= k);
  }
}

TEST_CASE("artificial tree matches exact enumeration") {
  for (std::size_t k : std::vector<std::size_t>{2, 3, bf::kUnboundedChildren}) {
    CAPTURE(k);
    const auto exact = ExactArtificial{k}.curve(6);
    CHECK(exact[0] == doctest::Approx(2.5));
    // Monte Carlo over many small trees.
    std::vector<double> sim(6, 0.0), lazy(6, 0.0);
    const int runs = 4000;
    for (int s = 0; s < runs; ++s) {
      bf::ArtificialTreeOptions o;
      o.insertions = 6;
      o.max_children = k;
      o.seed = 1000 + static_cast<std::uint64_t>(s);
      o.checkpoints = {1, 2, 3, 4, 5, 6};
      o.probes_per_checkpoint = 5;
      const auto r = bf::artificial_tree_sim(o);
      for (std::size_t i = 0; i < 6; ++i) sim[i] += r.curve.points[i].mean_comparisons / runs;
    }
    if (k != bf::kUnboundedChildren) {
      const auto c = bf::artificial_probe_curve({1, 2, 3, 4, 5, 6}, k, 40000, 3);
      for (std::size_t i = 0; i < 6; ++i) lazy[i] = c.points[i].mean_comparisons;
    }
    for (std::size_t i = 0; i < 6; ++i) {
      CAPTURE(i);
      CHECK(sim[i] == doctest::Approx(exact[i]).epsilon(0.02));
      if (k != bf::kUnboundedChildren) CHECK(lazy[i] == doctest::Approx(exact[i]).epsilon(0.02));
    }
  }
}

TEST_CASE("lazy probe sampler agrees with the full simulation past saturation") {
  // k = 5 saturates the root after about 15 insertions and deeper levels soon
  // after, so N up to 20000 crosses several levels.
  const std::size_t k = 5;
  const std::vector<std::size_t> cps{50, 500, 5000, 20000};
  std::vector<double> sim(cps.size(), 0.0);
  const int runs = 20;
  for (int s = 0; s < runs; ++s) {
    bf::ArtificialTreeOptions o;
    o.insertions = cps.back();
    o.max_children = k;
    o.seed = 77 + static_cast<std::uint64_t>(s);
    o.checkpoints = cps;
    o.probes_per_checkpoint = 1000;
    const auto r = bf::artificial_tree_sim(o);
    for (std::size_t i = 0; i < cps.size(); ++i) sim[i] += r.curve.points[i].mean_comparisons / runs;
  }
  const auto lazy = bf::artificial_probe_curve(V(cps.begin(), cps.end()), k, 20000, 5);
  for (std::size_t i = 0; i < cps.size(); ++i) {
    CAPTURE(cps[i]);
    CHECK(lazy.points[i].mean_comparisons == doctest::Approx(sim[i]).epsilon(0.02));
  }
}

TEST_CASE("artificial root fanout tracks sqrt(2N)") {
  bf::ArtificialTreeOptions o;
  o.insertions = 10000;
  o.seed = 4;
  const auto r = bf::artificial_tree_sim(o);
  CHECK(std::abs(static_cast<double>(r.root_fanout) / std::sqrt(2.0e4) - 1.0) < 0.15);
}

TEST_CASE("log checkpoints") {
  const auto c = bf::log_checkpoints(1, 1000, 3);
  CHECK(c.front() == 1);
  CHECK(c.back() == 1000);
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] > c[i - 1]);
}

TEST_CASE("fit families recover exact curves") {
  const auto log_curve = make_curve([](double n) { return 3.0 * std::log(n) + 2.0; });
  const auto power_curve = make_curve([](double n) { return 1.5 * std::sqrt(n); });

  const auto sel = bf::fit_and_select(log_curve, bf::FitFamily::logarithmic, bf::FitFamily::power);
  REQUIRE(sel.winner.has_value());
  CHECK(*sel.winner == bf::FitFamily::logarithmic);
  CHECK(sel.a.rms == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sel.b.rms > 0.0);
  CHECK(sel.a.coefficients[0] == doctest::Approx(3.0));
  CHECK(sel.a.coefficients[1] == doctest::Approx(2.0));

  const auto pw = bf::fit_and_select(power_curve, bf::FitFamily::power, bf::FitFamily::logarithmic);
  REQUIRE(pw.winner.has_value());
  CHECK(*pw.winner == bf::FitFamily::power);
  CHECK(pw.a.coefficients[0] == doctest::Approx(1.5));
  CHECK(pw.a.coefficients[1] == doctest::Approx(0.5));

  const auto quad = make_curve([](double n) { return 2e-4 * n * n + 0.5 * n + 7.0; }, 10);
  const auto q = bf::fit_family(quad, bf::FitFamily::quadratic, quad.size());
  CHECK(q.rms < 1e-6 * quad.points.back().mean_comparisons);

  const auto nlogn = make_curve([](double n) { return 0.7 * (n * std::log(n) - n); }, 10);
  const auto l = bf::fit_family(nlogn, bf::FitFamily::linearithmic, nlogn.size());
  CHECK(l.coefficients[0] == doctest::Approx(0.7));
}

TEST_CASE("fit selection is symmetric and cautious") {
  const auto curve = make_curve([](double n) { return 2.0 * std::pow(n, 0.3) + std::log(n); });
  const auto ab = bf::fit_and_select(curve, bf::FitFamily::power, bf::FitFamily::logarithmic);
  const auto ba = bf::fit_and_select(curve, bf::FitFamily::logarithmic, bf::FitFamily::power);
  CHECK(ab.a.rms == ba.b.rms);
  CHECK(ab.b.rms == ba.a.rms);
  CHECK(ab.winner == ba.winner);

  const auto flat = make_curve([](double) { return 4.0; });
  CHECK(!bf::fit_and_select(flat, bf::FitFamily::power, bf::FitFamily::logarithmic).winner.has_value());

  bf::ScalingCurve short_curve = make_curve([](double n) { return n; }, 5);
  CHECK_THROWS_AS(bf::fit_and_select(short_curve, bf::FitFamily::power, bf::FitFamily::logarithmic), bf::Error);

  bf::ScalingCurve bad = make_curve([](double n) { return n; }, 6);
  std::swap(bad.points[0], bad.points[1]);
  CHECK_THROWS_AS(bad.validate(), bf::Error);
  CHECK(bf::parse_family("logarithmic") == bf::FitFamily::logarithmic);
  CHECK(!bf::parse_family("cubic").has_value());
}

TEST_CASE("measure_scaling is reproducible and counts at least one comparison") {
  bf::ScalingOptions o;
  o.n_trees = 3;
  o.max_children = 5;
  o.seed = 12;
  o.checkpoints = {3, 100, 400};
  o.queries_per_checkpoint = 30;
  const auto src = bf::SyntheticSource::hypercube(4, 8);
  const auto a = bf::measure_scaling(o, src);
  const auto b = bf::measure_scaling(o, src);
  REQUIRE(a.size() == 3);
  CHECK(a.points[0].mean_comparisons >= 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.points[i].mean_comparisons == b.points[i].mean_comparisons);
  o.measure_fraction = true;
  const auto m = bf::measure_retrieval(o, src);
  for (const auto& c : m) CHECK((c.f > 0.0 && c.f <= 1.0));
}

TEST_CASE("very high dimensional data behaves like the artificial tree") {
  // Distances between uniform points in D = 10^4 concentrate, so a k = inf
  // tree should scale with nearly the artificial (equidistant) exponent.
  const std::size_t n = 3000;
  const auto sweep = bf::dimension_sweep({10000}, n, 3, 50, 30);
  REQUIRE(sweep.size() == 1);
  std::vector<double> cps;
  for (const auto& p : sweep[0].curve.points) cps.push_back(p.n);
  // Artificial curve at the same checkpoints, averaged over seeds.
  bf::ScalingCurve art;
  const int runs = 20;
  for (int s = 0; s < runs; ++s) {
    bf::ArtificialTreeOptions o;
    o.insertions = n;
    o.seed = 500 + static_cast<std::uint64_t>(s);
    for (double c : cps) o.checkpoints.push_back(static_cast<std::size_t>(c));
    o.probes_per_checkpoint = 200;
    const auto r = bf::artificial_tree_sim(o);
    if (art.empty()) {
      art = r.curve;
      for (auto& p : art.points) p.mean_comparisons /= runs;
    } else {
      for (std::size_t i = 0; i < art.size(); ++i) art.points[i].mean_comparisons += r.curve.points[i].mean_comparisons / runs;
    }
  }
  const double alpha_art = bf::fit_family(art, bf::FitFamily::power, art.size()).coefficients[1];
  CHECK(std::abs(sweep[0].alpha - alpha_art) < 0.1);
}
