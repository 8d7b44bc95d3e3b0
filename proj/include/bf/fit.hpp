#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace bf {

struct CurvePoint {
  double n = 0.0;
  double mean_comparisons = 0.0;
};

/// Cost as a function of the number of examples seen. N strictly increasing.
struct ScalingCurve {
  std::vector<CurvePoint> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  /// Points with lo <= N <= hi.
  ScalingCurve segment(double lo, double hi) const;
  /// Throws unless N is strictly increasing and every value is finite.
  void validate() const;
};

enum class FitFamily {
  power,         ///< a * N^alpha; coefficients {a, alpha}
  logarithmic,   ///< a * ln N + b; coefficients {a, b}
  quadratic,     ///< a N^2 + b N + c; coefficients {a, b, c}
  linearithmic,  ///< a (N ln N - N); coefficients {a}
};

std::string_view family_name(FitFamily family) noexcept;
std::optional<FitFamily> parse_family(std::string_view name) noexcept;

double evaluate_family(FitFamily family, std::span<const double> coefficients, double n);

struct FitReport {
  FitFamily family = FitFamily::power;
  std::vector<double> coefficients;
  /// Root-mean-square residual over the whole curve.
  double rms = 0.0;
  /// rival rms / this rms; +inf when this fit is exact and the rival is not.
  double rms_ratio = 1.0;
};

/// Least squares on the family's linearised form using the first fit_count
/// points; rms over every point.
FitReport fit_family(const ScalingCurve& curve, FitFamily family, std::size_t fit_count);

struct FitSelection {
  FitReport a;
  FitReport b;
  /// Set only when one rms is at least kRequiredRatio times smaller.
  std::optional<FitFamily> winner;

  static constexpr double kRequiredRatio = 5.0;
};

/// Fits both families on the first half of the curve (rounded up), scores them
/// on the whole curve, and names a winner only if one rms is at least 5x
/// smaller. A constant curve is inconclusive. Needs >= 6 points.
FitSelection fit_and_select(const ScalingCurve& curve, FitFamily family_a, FitFamily family_b);

}  // namespace bf
