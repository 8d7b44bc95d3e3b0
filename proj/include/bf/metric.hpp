#pragma once

#include <functional>
#include <span>

#include "bf/stats.hpp"

namespace bf {

/// Distance between positions. Euclidean is the built-in metric; any other real
/// function of two positions can be plugged in with PositionMetric::custom.
///
/// Traversal compares ordering keys rather than distances. For Euclidean the key
/// is the squared distance, which orders identically and skips the sqrt.
class PositionMetric {
 public:
  using Function = std::function<double(std::span<const double>, std::span<const double>)>;

  static PositionMetric euclidean() { return PositionMetric{}; }
  static PositionMetric custom(Function fn);

  bool is_euclidean() const noexcept { return !custom_; }

  /// Validated distance. Throws bf::Error on length mismatch or non-finite input.
  double distance(std::span<const double> a, std::span<const double> b,
                  QueryStats* stats = nullptr) const;

  /// Unvalidated ordering key; monotone in distance().
  double key(std::span<const double> a, std::span<const double> b) const;

  double key_to_distance(double key) const;

 private:
  PositionMetric() = default;
  Function custom_;
};

double distance(const PositionMetric& metric, std::span<const double> a, std::span<const double> b,
                QueryStats* stats = nullptr);

enum class LabelMetricKind {
  discrete,             ///< 0 if argmax classes agree, 1 otherwise
  absolute_difference,  ///< max_i |a_i - b_i|
  always_far,           ///< every pair is "far"; used for retrieval
};

/// Result of a label comparison. `far` stands in for +infinity so callers never
/// do arithmetic on an actual infinity.
struct LabelDistance {
  double value = 0.0;
  bool far = false;

  bool exceeds(double epsilon) const noexcept { return far || value > epsilon; }
};

LabelDistance label_distance(LabelMetricKind kind, std::span<const double> a, std::span<const double> b);

/// Index of the largest coordinate; lowest index wins ties. Throws on empty input.
std::size_t argmax(std::span<const double> values);

/// Throws bf::Error unless every entry is finite.
void require_finite(std::span<const double> values, const char* what);

}  // namespace bf
