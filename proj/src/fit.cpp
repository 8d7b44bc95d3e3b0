#include "bf/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "bf/types.hpp"

namespace bf {

namespace {

/// Solves the normal equations of a linear least-squares problem with the given
/// basis columns. Gaussian elimination with partial pivoting; m is tiny.
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns, std::span<const double> target) {
  const std::size_t m = columns.size();
  std::vector<double> gram(m * m, 0.0);
  std::vector<double> rhs(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t r = 0; r < target.size(); ++r) gram[i * m + j] += columns[i][r] * columns[j][r];
    }
    for (std::size_t r = 0; r < target.size(); ++r) rhs[i] += columns[i][r] * target[r];
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(gram[r * m + col]) > std::abs(gram[pivot * m + col])) pivot = r;
    }
    if (gram[pivot * m + col] == 0.0) throw Error("least squares: singular system");
    if (pivot != col) {
      for (std::size_t c = 0; c < m; ++c) std::swap(gram[col * m + c], gram[pivot * m + c]);
      std::swap(rhs[col], rhs[pivot]);
    }
    for (std::size_t r = col + 1; r < m; ++r) {
      const double factor = gram[r * m + col] / gram[col * m + col];
      for (std::size_t c = col; c < m; ++c) gram[r * m + c] -= factor * gram[col * m + c];
      rhs[r] -= factor * rhs[col];
    }
  }
  std::vector<double> x(m, 0.0);
  for (std::size_t i = m; i-- > 0;) {
    double v = rhs[i];
    for (std::size_t c = i + 1; c < m; ++c) v -= gram[i * m + c] * x[c];
    x[i] = v / gram[i * m + i];
  }
  return x;
}

double rival_ratio(double rival_rms, double own_rms) {
  if (own_rms == 0.0) return rival_rms == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return rival_rms / own_rms;
}

}  // namespace

ScalingCurve ScalingCurve::segment(double lo, double hi) const {
  ScalingCurve out;
  for (const auto& p : points) {
    if (p.n >= lo && p.n <= hi) out.points.push_back(p);
  }
  return out;
}

void ScalingCurve::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].n) || !std::isfinite(points[i].mean_comparisons)) {
      throw Error("scaling curve has a non-finite value");
    }
    if (i > 0 && !(points[i].n > points[i - 1].n)) throw Error("scaling curve N must be strictly increasing");
  }
}

std::string_view family_name(FitFamily family) noexcept {
  switch (family) {
    case FitFamily::power: return "power";
    case FitFamily::logarithmic: return "logarithmic";
    case FitFamily::quadratic: return "quadratic";
    case FitFamily::linearithmic: return "linearithmic";
  }
  return "unknown";
}

std::optional<FitFamily> parse_family(std::string_view name) noexcept {
  for (FitFamily f : {FitFamily::power, FitFamily::logarithmic, FitFamily::quadratic, FitFamily::linearithmic}) {
    if (name == family_name(f)) return f;
  }
  return std::nullopt;
}

double evaluate_family(FitFamily family, std::span<const double> c, double n) {
  switch (family) {
    case FitFamily::power: return c[0] * std::pow(n, c[1]);
    case FitFamily::logarithmic: return c[0] * std::log(n) + c[1];
    case FitFamily::quadratic: return (c[0] * n + c[1]) * n + c[2];
    case FitFamily::linearithmic: return c[0] * (n * std::log(n) - n);
  }
  return 0.0;
}

FitReport fit_family(const ScalingCurve& curve, FitFamily family, std::size_t fit_count) {
  curve.validate();
  if (fit_count < 2 || fit_count > curve.size()) throw Error("fit_family: invalid number of fit points");
  for (const auto& p : curve.points) {
    if (!(p.n > 0.0)) throw Error("fit_family: N must be positive");
  }

  const auto head = std::span(curve.points).first(fit_count);
  std::vector<double> target;
  target.reserve(fit_count);
  FitReport report;
  report.family = family;

  switch (family) {
    case FitFamily::power: {
      std::vector<double> ones(fit_count, 1.0), log_n;
      for (const auto& p : head) {
        if (!(p.mean_comparisons > 0.0)) throw Error("fit_family: power fit needs positive values");
        log_n.push_back(std::log(p.n));
        target.push_back(std::log(p.mean_comparisons));
      }
      const auto x = least_squares({log_n, ones}, target);
      report.coefficients = {std::exp(x[1]), x[0]};
      break;
    }
    case FitFamily::logarithmic: {
      std::vector<double> ones(fit_count, 1.0), log_n;
      for (const auto& p : head) {
        log_n.push_back(std::log(p.n));
        target.push_back(p.mean_comparisons);
      }
      const auto x = least_squares({log_n, ones}, target);
      report.coefficients = {x[0], x[1]};
      break;
    }
    case FitFamily::quadratic: {
      if (fit_count < 3) throw Error("fit_family: quadratic fit needs >= 3 points");
      // Solve in N / scale for conditioning, then undo the scaling.
      const double scale = head.back().n;
      std::vector<double> sq, lin, ones(fit_count, 1.0);
      for (const auto& p : head) {
        const double t = p.n / scale;
        sq.push_back(t * t);
        lin.push_back(t);
        target.push_back(p.mean_comparisons);
      }
      const auto x = least_squares({sq, lin, ones}, target);
      report.coefficients = {x[0] / (scale * scale), x[1] / scale, x[2]};
      break;
    }
    case FitFamily::linearithmic: {
      double num = 0.0, den = 0.0;
      for (const auto& p : head) {
        const double g = p.n * std::log(p.n) - p.n;
        num += g * p.mean_comparisons;
        den += g * g;
      }
      if (den == 0.0) throw Error("fit_family: degenerate linearithmic basis");
      report.coefficients = {num / den};
      break;
    }
  }

  double sum_sq = 0.0;
  for (const auto& p : curve.points) {
    const double r = p.mean_comparisons - evaluate_family(family, report.coefficients, p.n);
    sum_sq += r * r;
  }
  report.rms = std::sqrt(sum_sq / static_cast<double>(curve.size()));
  return report;
}

FitSelection fit_and_select(const ScalingCurve& curve, FitFamily family_a, FitFamily family_b) {
  curve.validate();
  if (curve.size() < 6) throw Error("fit_and_select: need at least 6 curve points");
  const std::size_t half = (curve.size() + 1) / 2;

  FitSelection out;
  out.a = fit_family(curve, family_a, half);
  out.b = fit_family(curve, family_b, half);
  out.a.rms_ratio = rival_ratio(out.b.rms, out.a.rms);
  out.b.rms_ratio = rival_ratio(out.a.rms, out.b.rms);

  const double first = curve.points.front().mean_comparisons;
  const bool constant = std::all_of(curve.points.begin(), curve.points.end(),
                                    [&](const CurvePoint& p) { return p.mean_comparisons == first; });
  if (constant) return out;
  if (out.a.rms_ratio >= FitSelection::kRequiredRatio) {
    out.winner = family_a;
  } else if (out.b.rms_ratio >= FitSelection::kRequiredRatio) {
    out.winner = family_b;
  }
  return out;
}

}  // namespace bf
