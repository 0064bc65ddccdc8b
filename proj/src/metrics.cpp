#include "pfoco/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "pfoco/error.hpp"

namespace pfoco {

std::vector<double> regret_curve(std::span<const RoundRecord> records, const Point& x_star,
                                 std::span<const RoundFunctions> rounds) {
  if (records.size() != rounds.size()) {
    throw Error(fmt::format("regret_curve: {} records but {} rounds", records.size(), rounds.size()));
  }
  std::vector<double> out;
  out.reserve(records.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    acc += records[i].f_val - evaluate(rounds[i].f, x_star, rounds[i].t, "f").value;
    out.push_back(acc);
  }
  return out;
}

std::vector<double> violation_curve(std::span<const RoundRecord> records, bool clipped) {
  std::vector<double> out;
  out.reserve(records.size());
  double acc = 0.0;
  for (const auto& r : records) {
    acc += clipped ? std::max(r.g_val, 0.0) : r.g_val;
    out.push_back(acc);
  }
  return out;
}

SlopeFit slope_fit(std::span<const double> horizons, std::span<const double> values) {
  if (horizons.size() != values.size()) throw Error("slope_fit: length mismatch");
  if (std::set<double>(horizons.begin(), horizons.end()).size() < 3) {
    throw Error("slope_fit: need at least three distinct horizons");
  }
  const auto n = static_cast<double>(horizons.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (!(horizons[i] > 0.0)) throw Error("slope_fit: horizons must be positive");
    if (!(values[i] > 0.0)) throw Error("slope_fit: metric values must be positive");
    const double x = std::log(horizons[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  SlopeFit fit;
  fit.slope = cxy / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r2 = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
  return fit;
}

GrowthFit regret_growth(std::span<const double> horizons, std::span<const double> values) {
  std::vector<double> floored(values.size());
  std::transform(values.begin(), values.end(), floored.begin(),
                 [](double v) { return std::max(std::abs(v), kGrowthFloor); });
  GrowthFit out;
  out.fit = slope_fit(horizons, floored);
  return out;
}

GrowthFit violation_growth(std::span<const double> horizons, std::span<const double> values) {
  GrowthFit out;
  if (std::any_of(values.begin(), values.end(), [](double v) { return v <= 0.0; })) {
    out.vacuous = true;
    out.note = "violation non-positive - bound vacuously satisfied";
    return out;
  }
  out.fit = slope_fit(horizons, values);
  return out;
}

SampleStats sample_stats(std::span<const double> values) {
  SampleStats s;
  s.count = values.size();
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.count - 1));
    s.stderr_mean = s.stddev / std::sqrt(static_cast<double>(s.count));
  }
  return s;
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::string records_csv(std::span<const RoundRecord> records) {
  std::string out = "t,f_val,g_val,lambda,x_hash\n";
  out.reserve(out.size() + records.size() * 80);
  for (const auto& r : records) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:016x}\n", r.t, r.f_val, r.g_val, r.lambda,
                       r.x_hash);
  }
  return out;
}

}  // namespace pfoco
