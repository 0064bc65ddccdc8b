#include <gtest/gtest.h>

#include "pfoco/alg1.hpp"
#include "pfoco/error.hpp"
#include "pfoco/metrics.hpp"
#include "support/toy.hpp"

using namespace pfoco;
using namespace pfoco::testing;

namespace {

ProblemBounds simple_bounds() {
  ProblemBounds b;
  b.grad_l2 = 2.0;
  b.grad_linf = 1.0;
  b.smoothness = 1.0;
  b.diameter_l1 = 2.0;
  b.diameter_l2 = 2.0;
  b.dim = 4;
  return b;
}

// Smooth-only oracle certificate, for configuration checks.
class SmoothOnlyFactory final : public OracleFactory {
 public:
  std::string name() const override { return "smooth_only"; }
  OracleMeta meta(const Domain&) const override { return {0.5, 0.0, 1.0, 1.0}; }
  std::unique_ptr<OnlineOracle> reset(const Domain&, const OracleResetArgs&, const ProblemBounds&,
                                      Rng&) const override {
    return nullptr;
  }
};

struct Toy {
  StochasticQuadraticInstance inst = StochasticQuadraticInstance::generate(QuadraticConfig{}, 3);
  Domain domain = inst.domain();
  ProblemBounds bounds = inst.bounds();
};

}  // namespace

TEST(Alg1Params, ThreeQuarterOracleAt4096) {
  const OracleMeta meta{0.75, 0.0, 1.5, 0.0};
  const ProblemBounds b = simple_bounds();
  const Alg1Params p = derive_params_alg1(4096, meta, b, 0.0);
  EXPECT_EQ(p.Q, 16u);
  EXPECT_EQ(p.K, 256u);
  EXPECT_NEAR(p.theta, 192.0 * (1.5 * b.grad_l2), 1e-9);
  EXPECT_NEAR(p.mu, 1.0 / (17.0 * p.theta), 1e-18);
  EXPECT_NEAR(p.theta * p.mu * (p.Q + 1), 1.0, 1e-15);
}

TEST(Alg1Params, BetaBoundary) {
  const OracleMeta meta{0.75, 0.0, 1.0, 0.0};
  const double bmax = alg1_max_beta(0.75);
  EXPECT_DOUBLE_EQ(bmax, 1.0 / 6.0);
  EXPECT_NO_THROW(derive_params_alg1(1000, meta, simple_bounds(), bmax));
  EXPECT_THROW(derive_params_alg1(1000, meta, simple_bounds(), bmax + 0.01), ConfigError);
  EXPECT_THROW(derive_params_alg1(1000, meta, simple_bounds(), -0.1), ConfigError);
  EXPECT_THROW(derive_params_alg1(3, meta, simple_bounds(), 0.0), ConfigError);
}

TEST(Alg1Params, SmoothOnlyOracleNeedsSmoothProblem) {
  ProblemBounds b = simple_bounds();
  b.smoothness = kNonSmooth;
  const SmoothOnlyFactory f;
  EXPECT_THROW(derive_params_alg1(256, f.meta(Domain::simplex(4)), b, 0.0), ConfigError);
  b.smoothness = 1.0;
  EXPECT_NO_THROW(derive_params_alg1(256, f.meta(Domain::simplex(4)), b, 0.0));
}

TEST(Alg1Params, CoverHorizon) {
  const OracleMeta meta{0.75, 0.0, 1.0, 0.0};
  for (std::size_t T : {4u, 5u, 63u, 64u, 65u, 1000u, 4095u, 4096u, 4097u}) {
    const Alg1Params p = derive_params_alg1(T, meta, simple_bounds(), 0.0);
    EXPECT_GE(p.Q * p.K, T) << T;
  }
}

TEST(Alg1Dual, Examples) {
  EXPECT_EQ(block_dual_update(0.0, -5.0, 1.0, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(block_dual_update(1.0, -3.0, 2.0, 0.1), 0.5);
  EXPECT_DOUBLE_EQ(block_dual_update(0.0, 4.0, 5.0, 0.1), 0.4);
}

TEST(Alg1Run, SingleRound) {
  Toy toy;
  auto rounds = quadratic_rounds(toy.inst, 1, 1);
  const Alg1Params p{1, 1, 1, 0.75, 0.0, 2.0, 0.25};
  ReplayStream s(rounds);
  Rng rng(1);
  const RunLog log = run_alg1(s, toy.domain, toy.bounds, p, OcgFactory{}, rng);
  ASSERT_EQ(log.records.size(), 1u);
  const Point x1 = toy.domain.canonical_point();
  EXPECT_EQ(log.records[0].x_hash, hash_point(x1));
  EXPECT_EQ(log.records[0].lambda, 0.0);
  const double g1 = rounds[0].g(x1).value;
  EXPECT_EQ(log.final_lambda, std::max(0.0, 0.25 * g1));
}

TEST(Alg1Run, NegativeConstraintKeepsMultiplierAtZero) {
  Toy toy;
  auto rounds = with_constant_constraint(quadratic_rounds(toy.inst, 200, 2), -1.0);
  const OcgFactory f;
  const Alg1Params p = derive_params_alg1(200, f.meta(toy.domain), toy.bounds, 0.0);
  ReplayStream s(rounds);
  Rng rng(2);
  const RunLog log = run_alg1(s, toy.domain, toy.bounds, p, f, rng);
  for (const auto& r : log.records) EXPECT_EQ(r.lambda, 0.0);
  EXPECT_EQ(log.final_lambda, 0.0);
}

TEST(Alg1Run, ShortFinalBlock) {
  Toy toy;
  auto rounds = quadratic_rounds(toy.inst, 10, 3);
  const Alg1Params p{10, 4, 3, 0.75, 0.0, 1.0, 0.2};
  ReplayStream s(rounds);
  Rng rng(3);
  const RunLog log = run_alg1(s, toy.domain, toy.bounds, p, OcgFactory{}, rng);
  ASSERT_EQ(log.records.size(), 10u);
  // lambda changes only at block boundaries (rounds 1, 4, 7, 10).
  for (std::size_t t = 1; t < 10; ++t) {
    if (t % 3 != 0) EXPECT_EQ(log.records[t].lambda, log.records[t - 1].lambda) << t;
  }
}

TEST(Alg1Run, Deterministic) {
  Toy toy;
  auto rounds = quadratic_rounds(toy.inst, 300, 4);
  const OcgFactory f;
  const Alg1Params p = derive_params_alg1(300, f.meta(toy.domain), toy.bounds, 0.0);
  auto once = [&] {
    ReplayStream s(rounds);
    Rng rng = make_stream({4, 300, 1});
    return records_csv(run_alg1(s, toy.domain, toy.bounds, p, f, rng).records);
  };
  EXPECT_EQ(once(), once());
}

TEST(Alg1Run, Causality) {
  // Iterates up to round s+1 depend only on rounds 1..s.
  Toy toy;
  const std::size_t T = 120, s = 50;
  auto a = quadratic_rounds(toy.inst, T, 5);
  auto b = a;
  auto tail = quadratic_rounds(toy.inst, T, 99);
  for (std::size_t t = s; t < T; ++t) b[t] = tail[t];
  const OcgFactory f;
  const Alg1Params p = derive_params_alg1(T, f.meta(toy.domain), toy.bounds, 0.0);
  SpyStream sa(a), sb(b);
  Rng ra(6), rb(6);
  const RunLog la = run_alg1(sa, toy.domain, toy.bounds, p, f, ra);
  const RunLog lb = run_alg1(sb, toy.domain, toy.bounds, p, f, rb);
  for (std::size_t t = 0; t <= s; ++t) EXPECT_EQ(la.records[t].x_hash, lb.records[t].x_hash) << t;
  // f_t is first evaluated at the logged x_t.
  for (std::size_t t = 0; t < T; ++t) {
    ASSERT_TRUE(sa.first_evaluations()[t]);
    EXPECT_EQ(hash_point(*sa.first_evaluations()[t]), la.records[t].x_hash);
  }
}

TEST(Alg1Run, FeasibilityChecksCounted) {
  Toy toy;
  auto rounds = quadratic_rounds(toy.inst, 64, 7);
  const OcgFactory f;
  const Alg1Params p = derive_params_alg1(64, f.meta(toy.domain), toy.bounds, 0.0);
  ReplayStream s(rounds);
  Rng rng(7);
  EXPECT_EQ(run_alg1(s, toy.domain, toy.bounds, p, f, rng).feasibility_checks, 64u);
}

TEST(Alg1Run, StreamTooShort) {
  Toy toy;
  auto rounds = quadratic_rounds(toy.inst, 5, 8);
  const Alg1Params p{10, 4, 3, 0.75, 0.0, 1.0, 0.2};
  ReplayStream s(rounds);
  Rng rng(8);
  EXPECT_THROW(run_alg1(s, toy.domain, toy.bounds, p, OcgFactory{}, rng), Error);
}
