#include "pfoco/functions.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pfoco/error.hpp"

namespace pfoco {

void ProblemBounds::validate() const {
  const bool ok = grad_l2 > 0.0 && grad_linf > 0.0 && smoothness > 0.0 && constraint > 0.0 &&
                  diameter_l1 > 0.0 && diameter_l2 > 0.0 && dim > 0;
  if (!ok) throw ConfigError("ProblemBounds: all constants must be positive");
}

Evaluation evaluate(const FirstOrder& fn, const Point& x, std::size_t t, const char* which) {
  Evaluation e = fn(x);
  if (!std::isfinite(e.value)) {
    throw Error(fmt::format("round {}: {} value is not finite", t, which));
  }
  if (e.gradient.size() != x.size()) {
    throw Error(fmt::format("round {}: {} gradient has length {}, expected {}", t, which,
                            e.gradient.size(), x.size()));
  }
  if (!e.gradient.all_finite()) {
    throw Error(fmt::format("round {}: {} gradient is not finite", t, which));
  }
  return e;
}

Point penalized_grad(const RoundFunctions& rf, double lambda, const Point& x) {
  if (lambda < 0.0) throw Error("penalized_grad: lambda must be >= 0");
  Point out = evaluate(rf.f, x, rf.t, "f").gradient;
  if (lambda != 0.0) out.values += lambda * evaluate(rf.g, x, rf.t, "g").gradient.values;
  out.shape = x.shape;
  return out;
}

double aug_lagrangian_value(const RoundFunctions& rf, const Point& x, double lambda, double theta,
                            double k_scale) {
  if (lambda < 0.0) throw Error("aug_lagrangian_value: lambda must be >= 0");
  if (k_scale < 1.0) throw Error("aug_lagrangian_value: k_scale must be >= 1");
  const double f = evaluate(rf.f, x, rf.t, "f").value;
  const double g = evaluate(rf.g, x, rf.t, "g").value;
  return f + lambda * g - theta * lambda * lambda / (2.0 * k_scale);
}

double dual_grad(double g_val, double lambda, double theta, double k_scale) {
  return g_val - theta / k_scale * lambda;
}

double clamped_dual_step(double lambda, double g, double theta, double mu) {
  return std::max(0.0, (1.0 - theta * mu) * lambda + mu * g);
}

}  // namespace pfoco
