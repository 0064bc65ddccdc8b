#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "pfoco/domains.hpp"
#include "pfoco/functions.hpp"
#include "pfoco/point.hpp"
#include "pfoco/rng.hpp"

namespace pfoco {

// Certificate of an (alpha, C0, C1, C2)-oracle: over any K rounds of
// D-Lipschitz, L-smooth convex losses its expected regret is at most
// (C0 + C1 D + C2 L) K^alpha. C2 > 0 means the guarantee needs smoothness.
struct OracleMeta {
  double alpha = 0.75;
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  bool requires_smooth() const { return c2 > 0.0; }
  void validate() const;
};

// Projection-free online convex optimization algorithm (no long-term
// constraint). The driver reads current(), reveals the round, then calls
// step() with the gradient at current(); step() returns the next point.
class OnlineOracle {
 public:
  virtual ~OnlineOracle() = default;
  virtual const Point& current() const = 0;
  virtual const Point& step(const Point& observed_grad) = 0;
};

struct OracleResetArgs {
  Point x0;
  std::size_t horizon = 1;
  // Bound on ||grad h_k||_2 for the losses this oracle will see.
  double grad_bound = 1.0;
};

class OracleFactory {
 public:
  virtual ~OracleFactory() = default;
  virtual std::string name() const = 0;
  virtual OracleMeta meta(const Domain& domain) const = 0;
  // Fresh oracle for one run of `horizon` rounds. Throws ConfigError if a
  // smooth-only oracle is paired with non-smooth bounds, Error if x0 is
  // infeasible.
  virtual std::unique_ptr<OnlineOracle> reset(const Domain& domain, const OracleResetArgs& args,
                                              const ProblemBounds& bounds, Rng& rng) const = 0;
};

// Online conditional gradient: one Frank-Wolfe step per round on the
// regularized leader objective eta <sum grads, x> + ||x - x0||^2, with
// step sigma_t = min(1, 2 / sqrt(t)).
class OcgOracle final : public OnlineOracle {
 public:
  OcgOracle(Domain domain, Point x0, double eta, Rng& rng);

  const Point& current() const override { return x_cur_; }
  const Point& step(const Point& observed_grad) override;

  double eta() const { return eta_; }
  std::size_t steps_taken() const { return t_; }
  const Point& grad_sum() const { return grad_sum_; }

  static double step_size(std::size_t t);

 private:
  Domain domain_;
  Point x0_;
  Point x_cur_;
  Point grad_sum_;
  double eta_;
  std::size_t t_ = 0;
  Rng rng_;
};

class OcgFactory final : public OracleFactory {
 public:
  std::string name() const override { return "ocg"; }
  // alpha = 3/4, C0 = 0, C1 = l2 diameter of the domain, C2 = 0.
  OracleMeta meta(const Domain& domain) const override;
  std::unique_ptr<OnlineOracle> reset(const Domain& domain, const OracleResetArgs& args,
                                      const ProblemBounds& bounds, Rng& rng) const override;

  // eta = R_2 / (2 G K^{3/4}).
  static double learning_rate(double l2_diameter, double grad_bound, std::size_t horizon);
};

std::unique_ptr<OracleFactory> make_oracle_factory(const std::string& name);

}  // namespace pfoco
