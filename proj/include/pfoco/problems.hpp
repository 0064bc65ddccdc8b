#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pfoco/domains.hpp"
#include "pfoco/functions.hpp"
#include "pfoco/rng.hpp"

namespace pfoco {

// ---------------------------------------------------------------------------
// Online matrix completion with a stochastic trace constraint.
//
//   f_t(X) = 1/2 sum_{(i,j) in B_t} (X_ij - M_ij)^2,   g_t(X) = <G^t, X>
//
// over the nuclear-norm ball of radius k. B_t is a uniformly random size-b
// subset of the entries and G^t ~ U[-1, 1]^{m x n}, drawn from one
// per-round stream. E[g_t] = 0, so every point of the ball is feasible for
// the averaged constraint.
//
// Bounds (X in the ball, ||M||_* = 1):
//   |X_ij| <= ||X||_op <= k and |M_ij| <= 1, so ||grad f||_inf <= k + 1;
//   ||grad g||_inf = ||G||_inf <= 1;
//   ||grad f||_2 <= ||X||_F + ||M||_F <= k + 1, ||G||_F <= sqrt(mn);
//   g_t(X) <= ||G||_inf ||X||_1 <= k sqrt(mn);
//   L = 1 in both the l2 and the l1 / l_inf pairing.
// ---------------------------------------------------------------------------

struct MatrixCompletionRound {
  // Revealed entries as column-major linear indices, sorted ascending.
  std::vector<Eigen::Index> entries;
  Eigen::MatrixXd constraint;  // G^t
};

class MatrixCompletionInstance {
 public:
  // Throws ConfigError unless 1 <= b <= m n and k >= 1.
  static MatrixCompletionInstance generate(Eigen::Index m, Eigen::Index n, double k,
                                           Eigen::Index b, std::uint64_t seed);
  // Rebuilds an instance around a given target (e.g. read from a tape).
  static MatrixCompletionInstance from_target(Eigen::MatrixXd target, double k, Eigen::Index b,
                                              std::uint64_t seed);

  Eigen::Index rows() const { return m_; }
  Eigen::Index cols() const { return n_; }
  double radius() const { return k_; }
  Eigen::Index revealed() const { return b_; }
  std::uint64_t seed() const { return seed_; }
  const Eigen::MatrixXd& target() const { return *target_; }

  Domain domain() const;
  ProblemBounds bounds() const;
  Point target_point() const;

  MatrixCompletionRound draw_round(Rng& rng) const;
  RoundFunctions make_round(std::size_t t, MatrixCompletionRound data) const;
  RoundFunctions sample_round(std::size_t t, Rng& rng) const {
    return make_round(t, draw_round(rng));
  }

  // sum_t f_t as a single objective: 1/2 sum_ij C_ij (X_ij - M_ij)^2 with
  // C_ij the number of rounds that revealed (i, j).
  FirstOrder total_loss(std::span<const MatrixCompletionRound> rounds) const;

 private:
  MatrixCompletionInstance() = default;
  Eigen::Index m_ = 0;
  Eigen::Index n_ = 0;
  double k_ = 1.0;
  Eigen::Index b_ = 1;
  std::uint64_t seed_ = 0;
  std::shared_ptr<const Eigen::MatrixXd> target_;
};

// ---------------------------------------------------------------------------
// Stochastic quadratic testbed.
//
//   f(x, w) = 1/2 ||x - c_w||^2,  c_w = c_bar + s_c U[-1, 1]^d
//   g(x, w) = <a_w, x> - b,      a_w = a_bar + s_a U[-1, 1]^d
//
// zero_mean: a_bar = 0, b = 0 so g_bar == 0. Otherwise a_bar is a random
// vector with ||a_bar||_inf = 1 and b > 0 (Slater point x = 0).
// Gradients are x - c_w and a_w, so L = 1 and all bounds follow from the
// domain norms plus ||c_bar||, ||a_bar|| and the noise scales.
// ---------------------------------------------------------------------------

struct QuadraticConfig {
  Eigen::Index dim = 10;
  std::string domain = "l1_ball";  // "l1_ball" or "box" ([-radius, radius]^d)
  double radius = 1.0;
  double center_l1 = 1.5;  // ||c_bar||_1
  double center_noise = 0.5;
  bool zero_mean_constraint = true;
  double constraint_noise = 1.0;
  double constraint_offset = 0.2;
};

struct QuadraticRound {
  Eigen::VectorXd center;
  Eigen::VectorXd direction;
};

class StochasticQuadraticInstance {
 public:
  static StochasticQuadraticInstance generate(const QuadraticConfig& config, std::uint64_t seed);

  const QuadraticConfig& config() const { return config_; }
  const Eigen::VectorXd& mean_center() const { return center_; }
  const Eigen::VectorXd& mean_direction() const { return direction_; }
  double offset() const { return offset_; }

  Domain domain() const;
  ProblemBounds bounds() const;

  QuadraticRound draw_round(Rng& rng) const;
  RoundFunctions make_round(std::size_t t, QuadraticRound data) const;
  RoundFunctions sample_round(std::size_t t, Rng& rng) const {
    return make_round(t, draw_round(rng));
  }

  // g_bar(x) = <a_bar, x> - b.
  FirstOrder mean_constraint() const;
  // sum_t f_t = T/2 ||x||^2 - <sum c_t, x> + 1/2 sum ||c_t||^2.
  FirstOrder total_loss(std::span<const QuadraticRound> rounds) const;

 private:
  QuadraticConfig config_;
  Eigen::VectorXd center_;
  Eigen::VectorXd direction_;
  double offset_ = 0.0;
};

// ---------------------------------------------------------------------------
// Offline benchmark x* = argmin { sum_t f_t(x) : x in X, g_bar(x) <= 0 }.
// ---------------------------------------------------------------------------

enum class FwStepRule {
  open_loop,    // gamma_k = 2 / (k + 1)
  line_search,  // exact line search by bisection on the directional derivative
};

struct BenchmarkOptions {
  std::size_t n_iters = 2000;
  double tol = 1e-6;  // Frank-Wolfe duality gap target
  FwStepRule step = FwStepRule::open_loop;
  std::optional<Point> x0;
  // Penalty mode only.
  double feasibility_tol = 1e-4;
  double initial_penalty = 1.0;
  int max_doublings = 40;
  bool keep_trace = false;
};

struct BenchmarkResult {
  Point x;
  double objective = 0.0;  // sum_t f_t(x)
  double gap = 0.0;        // Frank-Wolfe gap of the last solved surrogate
  std::size_t iterations = 0;
  bool converged = false;  // false = warning flag, gap > tol
  double penalty = 0.0;    // final penalty weight (0 when g_bar == 0)
  double mean_constraint = 0.0;
  std::vector<double> trace;  // surrogate objective per iteration
};

// Without `mean_constraint` every point of X is feasible and the realized
// total loss is minimized directly. With it, the smooth surrogate
// F(x) + P/2 [g_bar(x)]_+^2 is minimized and P doubled until
// g_bar(x) <= feasibility_tol.
BenchmarkResult benchmark_solve(const FirstOrder& objective, const Domain& domain,
                                const BenchmarkOptions& options, Rng& rng,
                                const FirstOrder* mean_constraint = nullptr);

// Frank-Wolfe on a single smooth objective (the inner solver of
// benchmark_solve, exposed for tests and audits).
BenchmarkResult frank_wolfe(const FirstOrder& objective, const Domain& domain, const Point& x0,
                            std::size_t n_iters, double tol, FwStepRule step, Rng& rng,
                            bool keep_trace = false);

}  // namespace pfoco
