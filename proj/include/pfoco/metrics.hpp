#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfoco/functions.hpp"
#include "pfoco/point.hpp"
#include "pfoco/run_log.hpp"

namespace pfoco {

// Prefix sums of f_t(x_t) - f_t(x*). Throws if the record and round
// sequences differ in length.
std::vector<double> regret_curve(std::span<const RoundRecord> records, const Point& x_star,
                                 std::span<const RoundFunctions> rounds);

// Prefix sums of g_t(x_t), or of [g_t(x_t)]_+ when `clipped`.
std::vector<double> violation_curve(std::span<const RoundRecord> records, bool clipped = false);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least-squares line through (log T, log value). Needs at least three
// distinct T and strictly positive values.
SlopeFit slope_fit(std::span<const double> horizons, std::span<const double> values);

inline constexpr double kGrowthFloor = 1e-6;

struct GrowthFit {
  std::optional<SlopeFit> fit;
  // Set when a one-sided bound holds trivially (mean metric <= 0 somewhere).
  bool vacuous = false;
  std::string note;
};

// Regret growth: fits max(|value|, 1e-6).
GrowthFit regret_growth(std::span<const double> horizons, std::span<const double> values);

// Violation growth: fitted only when the mean is positive at every T;
// otherwise the bound is reported as vacuously satisfied.
GrowthFit violation_growth(std::span<const double> horizons, std::span<const double> values);

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  double stderr_mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

SampleStats sample_stats(std::span<const double> values);

// Bit-exact record CSV: header `t,f_val,g_val,lambda,x_hash`, floats with
// 17 significant digits, x_hash as 16 lowercase hex digits, '\n' endings.
std::string records_csv(std::span<const RoundRecord> records);

// Formats a double with 17 significant digits.
std::string format_double(double v);

}  // namespace pfoco
