#include "pfoco/alg2.hpp"

#include <cmath>

#include <fmt/format.h>

#include "pfoco/error.hpp"
#include "pfoco/numeric.hpp"

namespace pfoco {

Alg2Params derive_params_alg2(std::size_t T, const ProblemBounds& bounds, double beta) {
  bounds.validate();
  if (T < 4) throw ConfigError(fmt::format("pdmfw: horizon T = {} must be >= 4", T));
  if (!(beta >= 0.0 && beta < 0.5)) {
    throw ConfigError(fmt::format("pdmfw: beta = {} outside the admissible interval [0, 1/2)", beta));
  }
  const double scale = std::pow(static_cast<double>(T), 0.5 + beta);
  const double sqrt_d = std::sqrt(static_cast<double>(bounds.dim));
  Alg2Params p;
  p.T = T;
  p.beta = beta;
  p.K = std::max<std::size_t>(1, snapped_floor(scale));
  p.theta = 12.0 * bounds.diameter_l1 * bounds.grad_linf * sqrt_d / scale;
  p.mu = 1.0 / (p.theta * (static_cast<double>(T) + 2.0));
  p.delta = 1.0 / (2.0 * bounds.grad_linf * sqrt_d * scale);
  return p;
}

PrimalUpdate primal_update(const Point& x_start, std::span<Ftpl> oracles, const Domain& domain,
                           const FeasibilityOptions& feasibility, std::size_t* checks) {
  if (oracles.empty()) throw Error("primal_update: need at least one oracle");
  PrimalUpdate out;
  out.inner.reserve(oracles.size());
  out.directions.reserve(oracles.size());
  Point x = x_start;
  for (std::size_t k = 1; k <= oracles.size(); ++k) {
    if (feasibility.enabled) {
      if (!domain.contains(x, feasibility.tol)) {
        throw Error(fmt::format("primal_update: inner iterate {} left the domain", k));
      }
      if (checks) ++*checks;
    }
    out.inner.push_back(x);
    Point v = oracles[k - 1].select();
    if (feasibility.enabled && !domain.contains(v, feasibility.tol)) {
      throw Error(fmt::format("primal_update: oracle {} returned an infeasible direction", k));
    }
    x.values += fw_step_size(k) * (v.values - x.values);
    out.directions.push_back(std::move(v));
  }
  out.x_next = std::move(x);
  return out;
}

double dual_update(double lambda_t, double g_val, double theta, double mu) {
  if (lambda_t < 0.0) throw Error("dual_update: lambda must be >= 0");
  return clamped_dual_step(lambda_t, g_val, theta, mu);
}

RunLog run_pdmfw(RoundStream& stream, const Domain& domain, const Alg2Params& params, Rng& rng,
                 const Alg2Options& options) {
  if (params.T < 1 || params.K < 1) throw Error("pdmfw: T and K must be >= 1");
  const double ftpl_delta =
      options.perturbation == PerturbationRange::analysis ? params.delta : 1.0 / params.delta;

  std::vector<Ftpl> oracles;
  oracles.reserve(params.K);
  for (std::size_t k = 0; k < params.K; ++k) oracles.emplace_back(domain, ftpl_delta, rng, options.lmo);

  RunLog log;
  log.records.reserve(params.T);
  const Point x1 = options.x1 ? *options.x1 : domain.canonical_point();
  Point x = x1;
  // Round 1 was not produced by a Frank-Wolfe pass; its inner iterates are x_1.
  std::vector<Point> inner(params.K, x1);
  double lambda = 0.0;
  FeasibilityOptions inner_check = options.feasibility;
  inner_check.enabled = options.feasibility.enabled && options.check_inner_iterates;

  for (std::size_t t = 1; t <= params.T; ++t) {
    if (options.feasibility.enabled) {
      if (!domain.contains(x, options.feasibility.tol)) {
        throw Error(fmt::format("pdmfw: iterate at round {} is infeasible", t));
      }
      ++log.feasibility_checks;
    }
    std::optional<RoundFunctions> rf = stream.next();
    if (!rf) throw Error(fmt::format("pdmfw: stream ended at round {} of {}", t, params.T));
    const Evaluation ef = evaluate(rf->f, x, t, "f");
    const Evaluation eg = evaluate(rf->g, x, t, "g");
    log.records.push_back({t, ef.value, eg.value, lambda, hash_point(x)});
    log.sum_lambda_sq += lambda * lambda;
    if (options.keep_iterates) log.iterates.push_back(x);

    auto feed = [&] {
      for (std::size_t k = 0; k < params.K; ++k) {
        oracles[k].observe(penalized_grad(*rf, lambda, inner[k]));
      }
    };
    const Point& start = options.start == StartRule::warm ? x : x1;
    if (options.history == HistoryIndex::through_current) feed();
    PrimalUpdate pu = primal_update(start, oracles, domain, inner_check, &log.feasibility_checks);
    if (options.history == HistoryIndex::lagged) feed();

    inner = std::move(pu.inner);
    x = std::move(pu.x_next);
    lambda = dual_update(lambda, eg.value, params.theta, params.mu);
  }
  log.final_lambda = lambda;
  return log;
}

}  // namespace pfoco
