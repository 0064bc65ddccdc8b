#include "pfoco/point.hpp"

#include <bit>
#include <cstring>

#include <fmt/format.h>

#include "pfoco/error.hpp"

namespace pfoco {

Eigen::Map<const Eigen::MatrixXd> Point::matrix() const {
  if (!shape) throw Error("Point::matrix: point has no matrix shape");
  return {values.data(), shape->rows, shape->cols};
}

Eigen::Map<Eigen::MatrixXd> Point::matrix() {
  if (!shape) throw Error("Point::matrix: point has no matrix shape");
  return {values.data(), shape->rows, shape->cols};
}

void check_point(const Point& p, std::string_view what) {
  if (p.shape && p.shape->rows * p.shape->cols != p.size()) {
    throw Error(fmt::format("{}: shape {}x{} does not match length {}", what, p.shape->rows,
                            p.shape->cols, p.size()));
  }
  if (!p.all_finite()) throw Error(fmt::format("{}: non-finite entry", what));
}

void check_same_size(const Point& a, const Point& b, std::string_view what) {
  if (a.size() != b.size()) {
    throw Error(fmt::format("{}: dimension mismatch ({} vs {})", what, a.size(), b.size()));
  }
}

double dot(const Point& a, const Point& b) {
  check_same_size(a, b, "dot");
  return a.values.dot(b.values);
}

std::uint64_t hash_point(const Point& p) {
  static_assert(std::endian::native == std::endian::little, "x_hash assumes little-endian");
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &p.values[i], sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

}  // namespace pfoco
