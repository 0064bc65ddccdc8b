#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace pfoco {

// ceil/floor that first snap values within a relative 1e-9 of an integer,
// so that e.g. 4096^(2/3) gives 256 rather than 257.
inline std::size_t snapped_ceil(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(x));
}

inline std::size_t snapped_floor(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::floor(x));
}

}  // namespace pfoco
