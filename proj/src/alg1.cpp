#include "pfoco/alg1.hpp"

#include <cmath>

#include <fmt/format.h>

#include "pfoco/error.hpp"
#include "pfoco/numeric.hpp"

namespace pfoco {

double alg1_max_beta(double alpha) { return (1.0 - alpha) / (3.0 - 2.0 * alpha); }

Alg1Params derive_params_alg1(std::size_t T, const OracleMeta& meta, const ProblemBounds& bounds,
                              double beta) {
  meta.validate();
  bounds.validate();
  if (T < 4) throw ConfigError(fmt::format("alg1: horizon T = {} must be >= 4", T));
  const double a = meta.alpha;
  const double beta_max = alg1_max_beta(a);
  if (!(beta >= 0.0 && beta <= beta_max)) {
    throw ConfigError(
        fmt::format("alg1: beta = {} outside the admissible interval [0, {}]", beta, beta_max));
  }
  if (meta.requires_smooth() && !bounds.smooth()) {
    throw ConfigError("alg1: oracle requires smooth losses (C2 > 0) but the problem is non-smooth");
  }
  const double scale = meta.c1 * bounds.grad_l2 + bounds.scaled_smoothness(meta.c2);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ConfigError("alg1: C1 D + C2 L must be positive and finite");
  }

  const double td = static_cast<double>(T);
  Alg1Params p;
  p.T = T;
  p.alpha = a;
  p.beta = beta;
  p.Q = snapped_ceil(std::pow(td, (2.0 - 2.0 * a) / (3.0 - 2.0 * a)));
  p.K = snapped_ceil(std::pow(td, 1.0 / (3.0 - 2.0 * a)));
  p.theta = 3.0 * scale * std::pow(td, a / (3.0 - 2.0 * a) - beta);
  p.mu = 1.0 / (p.theta * static_cast<double>(p.Q + 1));
  return p;
}

double block_dual_update(double lambda_q, double g_block_sum, double theta, double mu) {
  if (lambda_q < 0.0) throw Error("block_dual_update: lambda must be >= 0");
  return clamped_dual_step(lambda_q, g_block_sum, theta, mu);
}

RunLog run_alg1(RoundStream& stream, const Domain& domain, const ProblemBounds& bounds,
                const Alg1Params& params, const OracleFactory& factory, Rng& rng,
                const Alg1Options& options) {
  if (params.T < 1 || params.Q < 1 || params.K < 1) throw Error("alg1: T, Q, K must be >= 1");
  if (params.Q * params.K < params.T) throw Error("alg1: Q * K must cover the horizon T");

  RunLog log;
  log.records.reserve(params.T);
  Point x = options.x1 ? *options.x1 : domain.canonical_point();
  double lambda = 0.0;
  std::size_t t = 0;

  for (std::size_t q = 1; q <= params.Q && t < params.T; ++q) {
    const std::size_t block_len = std::min(params.K, params.T - t);
    OracleResetArgs args{x, block_len, bounds.grad_l2 * (1.0 + lambda)};
    std::unique_ptr<OnlineOracle> oracle = factory.reset(domain, args, bounds, rng);
    double g_sum = 0.0;

    for (std::size_t k = 1; k <= block_len; ++k) {
      ++t;
      const Point& xt = oracle->current();
      if (options.feasibility.enabled) {
        if (!domain.contains(xt, options.feasibility.tol)) {
          throw Error(fmt::format("alg1: oracle emitted an infeasible point at round {}", t));
        }
        ++log.feasibility_checks;
      }
      // The round is revealed only after x_t is fixed.
      std::optional<RoundFunctions> rf = stream.next();
      if (!rf) throw Error(fmt::format("alg1: stream ended at round {} of {}", t, params.T));
      const Evaluation ef = evaluate(rf->f, xt, t, "f");
      const Evaluation eg = evaluate(rf->g, xt, t, "g");
      log.records.push_back({t, ef.value, eg.value, lambda, hash_point(xt)});
      log.sum_lambda_sq += lambda * lambda;
      if (options.keep_iterates) log.iterates.push_back(xt);
      g_sum += eg.value;

      Point grad = ef.gradient;
      grad.values += lambda * eg.gradient.values;
      grad.shape = xt.shape;
      oracle->step(grad);
    }
    x = oracle->current();
    lambda = block_dual_update(lambda, g_sum, params.theta, params.mu);
  }
  log.final_lambda = lambda;
  return log;
}

}  // namespace pfoco
