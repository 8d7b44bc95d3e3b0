#include "bf/metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bf/simd/kernels.hpp"
#include "bf/types.hpp"

namespace bf {

PositionMetric PositionMetric::custom(Function fn) {
  if (!fn) throw Error("custom metric requires a callable");
  PositionMetric metric;
  metric.custom_ = std::move(fn);
  return metric;
}

double PositionMetric::distance(std::span<const double> a, std::span<const double> b,
                                QueryStats* stats) const {
  if (a.size() != b.size()) {
    throw Error("distance: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
  }
  require_finite(a, "distance: first argument");
  require_finite(b, "distance: second argument");
  if (stats) ++stats->metric_comparisons;
  return key_to_distance(key(a, b));
}

double PositionMetric::key(std::span<const double> a, std::span<const double> b) const {
  if (custom_) return custom_(a, b);
  return simd::squared_l2(a.data(), b.data(), a.size());
}

double PositionMetric::key_to_distance(double key) const { return custom_ ? key : std::sqrt(key); }

double distance(const PositionMetric& metric, std::span<const double> a, std::span<const double> b,
                QueryStats* stats) {
  return metric.distance(a, b, stats);
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw Error("argmax of an empty vector");
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

LabelDistance label_distance(LabelMetricKind kind, std::span<const double> a, std::span<const double> b) {
  if (kind == LabelMetricKind::always_far) return {0.0, true};
  if (a.size() != b.size()) {
    throw Error("label_distance: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
  }
  if (kind == LabelMetricKind::discrete) {
    return {argmax(a) == argmax(b) ? 0.0 : 1.0, false};
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return {worst, false};
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(std::string(what) + " contains a non-finite value");
  }
}

}  // namespace bf
