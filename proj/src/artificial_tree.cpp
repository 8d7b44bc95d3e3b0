#include "bf/artificial_tree.hpp"

#include <algorithm>
#include <cmath>

#include "bf/rng.hpp"

namespace bf {

namespace {

constexpr std::uint64_t kGrowthStream = 1;
constexpr std::uint64_t kProbeStream = 2;

class EquidistantTree {
 public:
  explicit EquidistantTree(std::size_t k) : k_(k) { children_.emplace_back(); }

  /// One walk from the root. Returns the stopping node; adds its cost to comparisons.
  std::uint32_t walk(Rng& rng, std::uint64_t& comparisons) const {
    std::uint32_t v = 0;
    for (;;) {
      const auto& kids = children_[v];
      const std::uint64_t q = kids.size();
      const bool can_stop = q < k_;
      comparisons += q + (can_stop ? 1 : 0);
      const std::uint64_t draw = rng.below(can_stop ? q + 1 : q);
      if (draw == q) return v;
      v = kids[draw];
    }
  }

  void attach(std::uint32_t parent) {
    const auto index = static_cast<std::uint32_t>(children_.size());
    children_[parent].push_back(index);
    children_.emplace_back();
  }

  std::size_t size() const noexcept { return children_.size(); }
  const std::vector<std::vector<std::uint32_t>>& children() const noexcept { return children_; }

 private:
  std::size_t k_;
  std::vector<std::vector<std::uint32_t>> children_;
};

}  // namespace

std::vector<std::size_t> log_checkpoints(std::size_t first, std::size_t last, std::size_t per_decade) {
  if (first == 0 || last < first || per_decade == 0) throw Error("log_checkpoints: invalid range");
  std::vector<std::size_t> out;
  const double lo = std::log10(static_cast<double>(first));
  const double hi = std::log10(static_cast<double>(last));
  const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) * static_cast<double>(per_decade)));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double exponent = std::min(hi, lo + static_cast<double>(i) / static_cast<double>(per_decade));
    const auto value = static_cast<std::size_t>(std::llround(std::pow(10.0, exponent)));
    const std::size_t clamped = std::clamp(value, first, last);
    if (out.empty() || clamped > out.back()) out.push_back(clamped);
  }
  if (out.back() != last) out.push_back(last);
  return out;
}

ArtificialTreeResult artificial_tree_sim(const ArtificialTreeOptions& options) {
  if (options.insertions == 0) throw Error("artificial_tree_sim: N must be >= 1");
  if (options.max_children < 2) throw Error("artificial_tree_sim: k must be > 1");
  if (!(options.tail_fraction > 0.0 && options.tail_fraction <= 1.0)) {
    throw Error("artificial_tree_sim: tail fraction must lie in (0, 1]");
  }
  const std::size_t n = options.insertions;
  std::vector<std::size_t> checkpoints =
      options.checkpoints.empty() ? log_checkpoints(1, n, 10) : options.checkpoints;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] == 0 || checkpoints[i] > n || (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      throw Error("artificial_tree_sim: checkpoints must be strictly increasing within [1, N]");
    }
  }

  EquidistantTree tree(options.max_children);
  ArtificialTreeResult result;

  Rng growth(derive_seed(options.seed, kGrowthStream));
  Rng probes(derive_seed(options.seed, kProbeStream));
  const auto tail_count = static_cast<std::size_t>(std::ceil(options.tail_fraction * static_cast<double>(n)));
  const std::size_t tail_start = n - std::min(tail_count, n);
  double tail_sum = 0.0, tail_n_sum = 0.0;
  std::size_t next_checkpoint = 0;

  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t cost = 0;
    const std::uint32_t parent = tree.walk(growth, cost);
    tree.attach(parent);
    if (i == 0) result.first_insertion_comparisons = cost;
    if (i >= tail_start) {
      tail_sum += static_cast<double>(cost);
      tail_n_sum += static_cast<double>(i);
    }
    if (!result.root_saturated_at && tree.children()[0].size() >= options.max_children) {
      result.root_saturated_at = i + 1;
    }
    const std::size_t seen = i + 1;
    if (next_checkpoint < checkpoints.size() && seen == checkpoints[next_checkpoint]) {
      if (options.probes_per_checkpoint > 0) {
        std::uint64_t total = 0;
        for (std::size_t p = 0; p < options.probes_per_checkpoint; ++p) tree.walk(probes, total);
        result.curve.points.push_back(
            {static_cast<double>(seen),
             static_cast<double>(total) / static_cast<double>(options.probes_per_checkpoint)});
      }
      ++next_checkpoint;
    }
  }

  const std::size_t tail_size = n - tail_start;
  result.tail_mean_comparisons = tail_sum / static_cast<double>(tail_size);
  // Insertion i (0-based) happens when the tree has seen i examples.
  result.tail_mean_n = tail_n_sum / static_cast<double>(tail_size);
  result.node_count = tree.size();
  for (const auto& kids : tree.children()) {
    ++result.fanout[kids.size()];
    result.max_fanout = std::max(result.max_fanout, kids.size());
  }
  result.root_fanout = tree.children()[0].size();
  return result;
}

}  // namespace bf

namespace bf {

std::uint64_t sample_probe_cost(std::uint64_t insertions, std::size_t max_children, Rng& rng) {
  if (max_children < 2 || max_children == kUnboundedChildren) {
    throw Error("sample_probe_cost: k must be finite and > 1");
  }
  const std::uint64_t k = max_children;
  std::vector<std::uint64_t> arrivals;
  arrivals.reserve(max_children);
  std::uint64_t cost = 0;
  std::uint64_t remaining = insertions;
  for (;;) {
    arrivals.clear();
    std::uint64_t used = 0;
    while (used < remaining && arrivals.size() < k) {
      const std::uint64_t q = arrivals.size();
      const std::uint64_t draw = rng.below(q + 1);
      if (draw == q) {
        arrivals.push_back(0);
      } else {
        ++arrivals[draw];
      }
      ++used;
    }
    const std::uint64_t q = arrivals.size();
    if (q < k) {
      cost += q + 1;
      const std::uint64_t draw = rng.below(q + 1);
      if (draw == q) return cost;
      remaining = arrivals[draw];
    } else {
      cost += k;
      const std::uint64_t child = rng.below(k);
      const std::uint64_t rest = remaining - used;
      std::uint64_t share = 0;
      if (rest > 0) {
        std::binomial_distribution<std::uint64_t> split(rest, 1.0 / static_cast<double>(k));
        share = split(rng);
      }
      remaining = arrivals[child] + share;
    }
  }
}

ScalingCurve artificial_probe_curve(const std::vector<double>& checkpoints, std::size_t max_children,
                                    std::size_t probes, std::uint64_t seed) {
  if (probes == 0) throw Error("artificial_probe_curve: need at least one probe");
  ScalingCurve curve;
  Rng rng(derive_seed(seed, kProbeStream));
  for (double n : checkpoints) {
    if (!(n >= 1.0) || n > 1e18) throw Error("artificial_probe_curve: checkpoints must lie in [1, 1e18]");
    const auto insertions = static_cast<std::uint64_t>(std::llround(n));
    std::uint64_t total = 0;
    for (std::size_t p = 0; p < probes; ++p) total += sample_probe_cost(insertions, max_children, rng);
    curve.points.push_back({n, static_cast<double>(total) / static_cast<double>(probes)});
  }
  curve.validate();
  return curve;
}

}  // namespace bf
