#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include <Eigen/Core>

namespace pfoco {

struct Shape {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;

  friend bool operator==(const Shape&, const Shape&) = default;
};

// A decision variable: a flat real vector, optionally carrying matrix shape.
// Matrices are stored column-major, matching Eigen's default layout.
struct Point {
  Eigen::VectorXd values;
  std::optional<Shape> shape;

  Point() = default;
  explicit Point(Eigen::VectorXd v) : values(std::move(v)) {}
  Point(Eigen::VectorXd v, std::optional<Shape> s) : values(std::move(v)), shape(s) {}

  static Point zeros_like(const Point& other) {
    return Point(Eigen::VectorXd::Zero(other.size()), other.shape);
  }

  Eigen::Index size() const { return values.size(); }

  bool all_finite() const { return values.allFinite(); }

  // Matrix view; requires a shape.
  Eigen::Map<const Eigen::MatrixXd> matrix() const;
  Eigen::Map<Eigen::MatrixXd> matrix();
};

// Throws pfoco::Error unless every entry is finite and any shape is
// consistent with the length. `what` names the caller in the message.
void check_point(const Point& p, std::string_view what);

// Throws pfoco::Error when lengths differ.
void check_same_size(const Point& a, const Point& b, std::string_view what);

double dot(const Point& a, const Point& b);

// FNV-1a digest of the raw little-endian bytes of the entries; used in
// the CSV logs to check bit-level determinism.
std::uint64_t hash_point(const Point& p);

}  // namespace pfoco
