#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pfoco/domains.hpp"
#include "pfoco/ftpl.hpp"
#include "pfoco/functions.hpp"
#include "pfoco/rng.hpp"
#include "pfoco/run_log.hpp"

namespace pfoco {

// Primal-Dual Meta-Frank-Wolfe. Every round runs K Frank-Wolfe steps whose
// directions come from K persistent FTPL instances, followed by one dual
// ascent step on the augmented Lagrangian.
struct Alg2Params {
  std::size_t T = 1;
  std::size_t K = 1;
  double beta = 0.0;
  double theta = 1.0;
  double mu = 1.0;
  // 1 / (2 D sqrt(d) T^{1/2 + beta}).
  double delta = 1.0;
};

// K = floor(T^{1/2+beta}), theta = 12 R D sqrt(d) / T^{1/2+beta},
// mu = 1 / (theta (T + 2)), with D the l_inf gradient bound and R the l1
// diameter. beta must lie in [0, 1/2); beta = 0 is the strong-duality mode.
Alg2Params derive_params_alg2(std::size_t T, const ProblemBounds& bounds, double beta);

// gamma_k = 2 / (k + 1).
inline double fw_step_size(std::size_t k) { return 2.0 / (static_cast<double>(k) + 1.0); }

struct PrimalUpdate {
  Point x_next;
  std::vector<Point> inner;       // x^1 .. x^K (x^1 = start)
  std::vector<Point> directions;  // v^1 .. v^K
};

// x^{k+1} = x^k + gamma_k (v^k - x^k) with v^k = oracles[k].select().
// Throws if an oracle returns a point outside the domain (checked when
// feasibility is enabled; inner iterates are checked as well).
PrimalUpdate primal_update(const Point& x_start, std::span<Ftpl> oracles, const Domain& domain,
                           const FeasibilityOptions& feasibility = {},
                           std::size_t* checks = nullptr);

// lambda_{t+1} = [(1 - theta mu) lambda_t + mu g_t(x_t)]_+.
double dual_update(double lambda_t, double g_val, double theta, double mu);

// Where each round's inner Frank-Wolfe pass starts.
enum class StartRule {
  warm,  // x_{t+1}^1 = x_t
  cold,  // x_{t+1}^1 = x_1
};

// Which history the FTPL selection for x_{t+1} sees.
enum class HistoryIndex {
  through_current,  // coefficients of rounds 1..t
  lagged,           // coefficients of rounds 1..t-1
};

// Range of the FTPL perturbation.
enum class PerturbationRange {
  // p ~ U[0, delta]^d, as written in the FTPL pseudocode.
  pseudocode,
  // p ~ U[0, 1/delta]^d, the range used by the FTPL regret analysis.
  analysis,
};

struct Alg2Options {
  std::optional<Point> x1;
  StartRule start = StartRule::warm;
  HistoryIndex history = HistoryIndex::through_current;
  PerturbationRange perturbation = PerturbationRange::pseudocode;
  FeasibilityOptions feasibility;
  bool check_inner_iterates = true;
  bool keep_iterates = false;
  LmoOptions lmo;
};

RunLog run_pdmfw(RoundStream& stream, const Domain& domain, const Alg2Params& params, Rng& rng,
                 const Alg2Options& options = {});

}  // namespace pfoco
