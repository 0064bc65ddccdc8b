#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include "pfoco/point.hpp"

namespace pfoco {

struct Evaluation {
  double value = 0.0;
  Point gradient;
};

// First-order oracle of a convex function on the domain.
using FirstOrder = std::function<Evaluation(const Point&)>;

// Loss f_t and constraint g_t revealed at round t (1-based).
struct RoundFunctions {
  std::size_t t = 0;
  FirstOrder f;
  FirstOrder g;
};

inline constexpr double kNonSmooth = std::numeric_limits<double>::infinity();

// Problem constants. Gradient bounds are kept in both norm pairs since the
// blocked framework works in l2 while PDMFW works in l1 / l_inf.
struct ProblemBounds {
  double grad_l2 = 1.0;    // ||grad f_t||_2, ||grad g_t||_2 <= grad_l2
  double grad_linf = 1.0;  // ||grad f_t||_inf, ||grad g_t||_inf <= grad_linf
  double smoothness = kNonSmooth;
  double constraint = 1.0;  // g_t(x) <= constraint
  double diameter_l1 = 1.0;
  double diameter_l2 = 1.0;
  std::size_t dim = 1;

  bool smooth() const { return std::isfinite(smoothness); }
  // c * L with the 0 * inf = 0 convention for non-smooth problems.
  double scaled_smoothness(double c) const { return c == 0.0 ? 0.0 : c * smoothness; }
  void validate() const;
};

struct DualState {
  double lambda = 0.0;
  double theta = 1.0;
  double mu = 1.0;
};

// grad f_t(x) + lambda * grad g_t(x).
Point penalized_grad(const RoundFunctions& rf, double lambda, const Point& x);

// f_t(x) + lambda g_t(x) - theta lambda^2 / (2 k_scale). PDMFW uses
// k_scale = 1; the blocked framework uses k_scale = K.
double aug_lagrangian_value(const RoundFunctions& rf, const Point& x, double lambda, double theta,
                            double k_scale);

// d/d lambda of the augmented Lagrangian: g - theta lambda / k_scale.
double dual_grad(double g_val, double lambda, double theta, double k_scale);

// [(1 - theta mu) lambda + mu g]_+, shared by both dual updates.
double clamped_dual_step(double lambda, double g, double theta, double mu);

// Evaluates f or g and validates the gradient, naming the round on failure.
Evaluation evaluate(const FirstOrder& fn, const Point& x, std::size_t t, const char* which);

}  // namespace pfoco
