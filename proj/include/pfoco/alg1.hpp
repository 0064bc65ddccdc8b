#pragma once

#include <cstddef>
#include <optional>

#include "pfoco/domains.hpp"
#include "pfoco/functions.hpp"
#include "pfoco/oracle.hpp"
#include "pfoco/rng.hpp"
#include "pfoco/run_log.hpp"

namespace pfoco {

// Online primal-dual projection-free framework: the horizon is cut into Q
// blocks of K rounds; inside block q a fresh oracle minimizes the penalized
// losses f_t + lambda_q g_t, and lambda is updated once per block.
struct Alg1Params {
  std::size_t T = 1;
  std::size_t Q = 1;
  std::size_t K = 1;
  double alpha = 0.75;
  double beta = 0.0;
  double theta = 1.0;
  double mu = 1.0;
};

// Largest admissible beta: (1 - alpha) / (3 - 2 alpha).
double alg1_max_beta(double alpha);

// Q = ceil(T^{(2-2a)/(3-2a)}), K = ceil(T^{1/(3-2a)}),
// theta = 3 (C1 D + C2 L) T^{a/(3-2a) - beta}, mu = 1 / (theta (Q + 1)).
// D is the l2 gradient bound. Throws ConfigError for T < 4, beta outside
// [0, alg1_max_beta], or a smooth-only oracle with non-smooth bounds.
Alg1Params derive_params_alg1(std::size_t T, const OracleMeta& meta, const ProblemBounds& bounds,
                              double beta);

// lambda_{q+1} = [(1 - theta mu) lambda_q + mu sum_block g_t(x_t)]_+.
double block_dual_update(double lambda_q, double g_block_sum, double theta, double mu);

struct Alg1Options {
  std::optional<Point> x1;  // defaults to domain.canonical_point()
  FeasibilityOptions feasibility;
  bool keep_iterates = false;
};

// Runs T rounds. The final block is shorter when Q K > T; its dual update
// uses the partial sum. Each block gets a fresh oracle warm-started at the
// last iterate.
RunLog run_alg1(RoundStream& stream, const Domain& domain, const ProblemBounds& bounds,
                const Alg1Params& params, const OracleFactory& factory, Rng& rng,
                const Alg1Options& options = {});

}  // namespace pfoco
