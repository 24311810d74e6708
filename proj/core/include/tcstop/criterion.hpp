#pragma once

#include <cmath>
#include <optional>
#include <string_view>

namespace tcstop {

/// Mean-standard deviation (E - c*sd) or mean-variance (E - c*Var).
enum class Criterion { MeanStd, MeanVariance };

constexpr std::string_view to_string(Criterion c) {
  return c == Criterion::MeanStd ? "msd" : "mv";
}

constexpr std::optional<Criterion> parse_criterion(std::string_view s) {
  if (s == "msd") return Criterion::MeanStd;
  if (s == "mv") return Criterion::MeanVariance;
  return std::nullopt;
}

/// second - mean^2 with rounding noise below zero clamped away.
inline double variance_from_moments(double mean, double second) {
  const double v = second - mean * mean;
  return v > 0.0 ? v : 0.0;
}

inline double criterion_value(double mean, double variance, double c,
                              Criterion criterion) {
  return criterion == Criterion::MeanStd ? mean - c * std::sqrt(variance)
                                         : mean - c * variance;
}

}  // namespace tcstop
