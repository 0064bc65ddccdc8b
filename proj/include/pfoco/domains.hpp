#pragma once

#include <optional>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "pfoco/point.hpp"
#include "pfoco/rng.hpp"

namespace pfoco {

// Compact convex feasible sets that expose a linear minimization oracle
// (LMO) instead of a projection.

struct BoxSet {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

struct L1BallSet {
  Eigen::Index dim = 0;
  double radius = 1.0;
};

// Probability simplex {x >= 0, sum x = 1}.
struct SimplexSet {
  Eigen::Index dim = 0;
};

// {X in R^{rows x cols} : ||X||_* <= radius}.
struct NuclearBallSet {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  double radius = 1.0;
};

struct SingularTriplet {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  double sigma = 0.0;
  int iterations = 0;
  bool converged = false;
};

// 1 + ceil(10 log(max(m, n))).
int default_power_iterations(Eigen::Index rows, Eigen::Index cols);

// Top singular pair of W by alternating power iteration from a random unit
// start drawn from `rng`. Stops once ||W v - sigma u|| <= tol * sigma or
// after max_iters sweeps. Returns nullopt for a null matrix (||W||_F < 1e-12).
std::optional<SingularTriplet> power_iteration(const Eigen::MatrixXd& w, int max_iters, double tol,
                                               Rng& rng);

struct LmoOptions {
  // 0 selects the automatic cap: 50 * default_power_iterations(m, n).
  int max_power_iters = 0;
  double power_tol = 1e-9;
};

class Domain {
 public:
  using Kind = std::variant<BoxSet, L1BallSet, SimplexSet, NuclearBallSet>;

  static Domain box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static Domain uniform_box(Eigen::Index dim, double lo, double hi);
  static Domain l1_ball(Eigen::Index dim, double radius);
  static Domain simplex(Eigen::Index dim);
  static Domain nuclear_ball(Eigen::Index rows, Eigen::Index cols, double radius);

  const Kind& kind() const { return kind_; }
  Eigen::Index dim() const;
  std::string name() const;
  std::optional<Shape> shape() const;

  // Wraps raw values with this domain's shape metadata.
  Point make_point(Eigen::VectorXd values) const;

  // The fixed point returned by the LMO for a (near-)zero functional:
  // box -> lo, balls -> 0, simplex -> e_1. Also the default initial iterate.
  Point canonical_point() const;

  // argmin_{v in X} <w, v>.
  Point lmo(const Point& w, Rng& rng, const LmoOptions& options = {}) const;

  bool contains(const Point& x, double tol) const;

  // l1 diameter R = max ||x - y||_1.
  double diameter() const;
  // l2 (Frobenius) diameter.
  double l2_diameter() const;

  // max over X of ||x||_1, ||x||_2 and ||x||_inf; used to derive gradient
  // and constraint bounds for the built-in problems.
  double max_l1_norm() const;
  double max_l2_norm() const;
  double max_abs_entry() const;

 private:
  explicit Domain(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

// Sum of singular values, computed with a dense SVD.
double nuclear_norm(const Eigen::MatrixXd& m);

}  // namespace pfoco
