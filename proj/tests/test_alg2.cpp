#include <gtest/gtest.h>

#include "pfoco/alg2.hpp"
#include "pfoco/error.hpp"
#include "pfoco/metrics.hpp"
#include "support/toy.hpp"

using namespace pfoco;
using namespace pfoco::testing;

namespace {

struct Toy {
  StochasticQuadraticInstance inst = StochasticQuadraticInstance::generate(QuadraticConfig{}, 3);
  Domain domain = inst.domain();
  ProblemBounds bounds = inst.bounds();
};

// FTPL instance on [0,1] whose selection is forced to `target` (0 or 1).
Ftpl forced(double target, Rng& rng) {
  Ftpl f(Domain::uniform_box(1, 0.0, 1.0), 1.0, rng);  // p in [0, 1]
  f.observe(Point(Eigen::VectorXd::Constant(1, target > 0.5 ? -5.0 : 5.0)));
  return f;
}

RunLog run(const Toy& toy, const std::vector<RoundFunctions>& rounds, const Alg2Params& p, std::uint64_t seed,
           const Alg2Options& opts = {}) {
  ReplayStream s(rounds);
  Rng rng = make_stream({seed});
  return run_pdmfw(s, toy.domain, p, rng, opts);
}

}  // namespace

TEST(Alg2Params, Examples) {
  ProblemBounds b;
  b.grad_linf = 1.0;
  b.diameter_l1 = 1.0;
  b.dim = 1;
  const Alg2Params p = derive_params_alg2(256, b, 0.25);
  EXPECT_EQ(p.K, 64u);
  EXPECT_DOUBLE_EQ(p.theta, 0.1875);
  EXPECT_DOUBLE_EQ(p.mu, 1.0 / (0.1875 * 258.0));
  EXPECT_DOUBLE_EQ(p.delta, 1.0 / 128.0);
  EXPECT_THROW(derive_params_alg2(256, b, 0.5), ConfigError);
  EXPECT_THROW(derive_params_alg2(256, b, -0.01), ConfigError);
  EXPECT_THROW(derive_params_alg2(2, b, 0.0), ConfigError);
}

TEST(Alg2Params, FloorIsSnapped) {
  ProblemBounds b;
  for (std::size_t T : {16u, 64u, 256u, 1024u, 4096u}) {
    EXPECT_EQ(derive_params_alg2(T, b, 0.0).K, static_cast<std::size_t>(std::lround(std::sqrt(double(T)))));
  }
}

TEST(StepSize, Schedule) {
  EXPECT_EQ(fw_step_size(1), 1.0);
  EXPECT_DOUBLE_EQ(fw_step_size(2), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(fw_step_size(3), 0.5);
}

TEST(PrimalUpdate, SingleStepLandsOnDirection) {
  Rng rng(1);
  std::vector<Ftpl> o;
  o.push_back(forced(1.0, rng));
  const Domain box = Domain::uniform_box(1, 0.0, 1.0);
  const PrimalUpdate pu = primal_update(Point(Eigen::VectorXd::Constant(1, 0.3)), o, box);
  EXPECT_EQ(pu.x_next.values[0], 1.0);
}

TEST(PrimalUpdate, RepeatedDirection) {
  Rng rng(1);
  std::vector<Ftpl> o;
  o.push_back(forced(0.0, rng));
  o.push_back(forced(0.0, rng));
  const PrimalUpdate pu =
      primal_update(Point(Eigen::VectorXd::Constant(1, 0.8)), o, Domain::uniform_box(1, 0.0, 1.0));
  EXPECT_EQ(pu.x_next.values[0], 0.0);
}

TEST(PrimalUpdate, ThreeStepArithmetic) {
  Rng rng(1);
  std::vector<Ftpl> o;
  o.push_back(forced(1.0, rng));
  o.push_back(forced(0.0, rng));
  o.push_back(forced(1.0, rng));
  const PrimalUpdate pu =
      primal_update(Point(Eigen::VectorXd::Zero(1)), o, Domain::uniform_box(1, 0.0, 1.0));
  ASSERT_EQ(pu.inner.size(), 3u);
  EXPECT_EQ(pu.inner[0].values[0], 0.0);
  EXPECT_DOUBLE_EQ(pu.inner[1].values[0], 1.0);
  EXPECT_DOUBLE_EQ(pu.inner[2].values[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(pu.x_next.values[0], 2.0 / 3.0);
  EXPECT_EQ(pu.directions[1].values[0], 0.0);
}

TEST(DualUpdate, Examples) {
  EXPECT_EQ(dual_update(0.0, -1.0, 1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(dual_update(2.0, 1.0, 0.4, 0.5), 2.1);
  EXPECT_DOUBLE_EQ(dual_update(1.0, 0.2, 0.2, 0.5), 1.0);
}

TEST(Pdmfw, SingleRound) {
  Toy toy;
  auto rounds = quadratic_rounds(toy.inst, 1, 1);
  Alg2Params p;
  p.T = 1;
  p.K = 2;
  p.theta = 1.0;
  p.mu = 0.3;
  p.delta = 0.1;
  const RunLog log = run(toy, rounds, p, 1);
  ASSERT_EQ(log.records.size(), 1u);
  const Point x1 = toy.domain.canonical_point();
  EXPECT_EQ(log.records[0].x_hash, hash_point(x1));
  EXPECT_EQ(log.final_lambda, std::max(0.0, 0.3 * rounds[0].g(x1).value));
}

TEST(Pdmfw, ZeroConstraintKeepsMultiplierAtZero) {
  Toy toy;
  auto rounds = with_constant_constraint(quadratic_rounds(toy.inst, 128, 2), 0.0);
  const RunLog log = run(toy, rounds, derive_params_alg2(128, toy.bounds, 0.1), 2);
  for (const auto& r : log.records) EXPECT_EQ(r.lambda, 0.0);
}

TEST(Pdmfw, NegativeConstraintKeepsMultiplierAtZero) {
  Toy toy;
  auto rounds = with_constant_constraint(quadratic_rounds(toy.inst, 128, 2), -1.0);
  const RunLog log = run(toy, rounds, derive_params_alg2(128, toy.bounds, 0.1), 2);
  EXPECT_EQ(log.final_lambda, 0.0);
}

TEST(Pdmfw, Deterministic) {
  Toy toy;
  auto rounds = quadratic_rounds(toy.inst, 100, 3);
  const Alg2Params p = derive_params_alg2(100, toy.bounds, 0.1);
  EXPECT_EQ(records_csv(run(toy, rounds, p, 7).records), records_csv(run(toy, rounds, p, 7).records));
  EXPECT_NE(records_csv(run(toy, rounds, p, 7).records), records_csv(run(toy, rounds, p, 8).records));
}

TEST(Pdmfw, Causality) {
  Toy toy;
  const std::size_t T = 80, s = 30;
  auto a = quadratic_rounds(toy.inst, T, 5);
  auto b = a;
  auto tail = quadratic_rounds(toy.inst, T, 77);
  for (std::size_t t = s; t < T; ++t) b[t] = tail[t];
  const Alg2Params p = derive_params_alg2(T, toy.bounds, 0.1);
  for (auto h : {HistoryIndex::through_current, HistoryIndex::lagged}) {
    Alg2Options opts;
    opts.history = h;
    SpyStream sa(a), sb(b);
    Rng ra(6), rb(6);
    const RunLog la = run_pdmfw(sa, toy.domain, p, ra, opts);
    const RunLog lb = run_pdmfw(sb, toy.domain, p, rb, opts);
    for (std::size_t t = 0; t <= s; ++t) EXPECT_EQ(la.records[t].x_hash, lb.records[t].x_hash) << t;
    for (std::size_t t = 0; t < T; ++t) {
      ASSERT_TRUE(sa.first_evaluations()[t]);
      EXPECT_EQ(hash_point(*sa.first_evaluations()[t]), la.records[t].x_hash);
    }
  }
}

TEST(Pdmfw, SwitchesChangeTheRun) {
  Toy toy;
  auto rounds = quadratic_rounds(toy.inst, 64, 9);
  const Alg2Params p = derive_params_alg2(64, toy.bounds, 0.1);
  const std::string base = records_csv(run(toy, rounds, p, 1).records);
  Alg2Options cold;
  cold.start = StartRule::cold;
  Alg2Options lagged;
  lagged.history = HistoryIndex::lagged;
  Alg2Options analysis;
  analysis.perturbation = PerturbationRange::analysis;
  EXPECT_NE(base, records_csv(run(toy, rounds, p, 1, cold).records));
  EXPECT_NE(base, records_csv(run(toy, rounds, p, 1, lagged).records));
  EXPECT_NE(base, records_csv(run(toy, rounds, p, 1, analysis).records));
}

TEST(Pdmfw, IteratesFeasibleAndChecked) {
  Toy toy;
  auto rounds = quadratic_rounds(toy.inst, 64, 10);
  const Alg2Params p = derive_params_alg2(64, toy.bounds, 0.1);
  Alg2Options opts;
  opts.keep_iterates = true;
  const RunLog log = run(toy, rounds, p, 3, opts);
  ASSERT_EQ(log.iterates.size(), 64u);
  for (const auto& x : log.iterates) EXPECT_TRUE(toy.domain.contains(x, 1e-8));
  EXPECT_GE(log.feasibility_checks, 64u * (p.K + 1));
  opts.feasibility.enabled = false;
  EXPECT_EQ(run(toy, rounds, p, 3, opts).feasibility_checks, 0u);
}

TEST(Pdmfw, SumLambdaSquared) {
  Toy toy;
  QuadraticConfig c;
  c.zero_mean_constraint = false;
  const auto inst = StochasticQuadraticInstance::generate(c, 4);
  auto rounds = quadratic_rounds(inst, 64, 11);
  const Alg2Params p = derive_params_alg2(64, inst.bounds(), 0.1);
  ReplayStream s(rounds);
  Rng rng(4);
  const RunLog log = run_pdmfw(s, inst.domain(), p, rng);
  double sum = 0.0;
  for (const auto& r : log.records) sum += r.lambda * r.lambda;
  EXPECT_DOUBLE_EQ(log.sum_lambda_sq, sum);
}
